#include "katolab/verify.hpp"

#include "katolab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace katolab {

namespace {

constexpr double kPositivityFloor = 1e-14;
constexpr int kEveryTimeKernelPoints = 1000;

std::span<const double> view(const Eigen::VectorXd& x) { return {x.data(), static_cast<std::size_t>(x.size())}; }

VerificationReport startReport(std::string name, std::string manifold, const std::optional<EstimateParams>& params,
                               TolerancePolicy tolerance) {
  VerificationReport r;
  r.checkName = std::move(name);
  r.manifold = std::move(manifold);
  r.params = params;
  r.tolerance = tolerance;
  r.worstMargin = std::numeric_limits<double>::infinity();
  return r;
}

void requireTimes(const std::vector<double>& times, bool allowZero) {
  if (times.empty()) throw InputError("time grid is empty");
  for (double t : times) {
    if (!(allowZero ? t >= 0.0 : t > 0.0)) throw InputError("time grid entries must be positive");
  }
}

std::string describeTorus(const AnalyticFlatTorus& torus) {
  std::ostringstream os;
  os << "flat-torus-analytic:";
  for (std::size_t i = 0; i < torus.periods().size(); ++i) os << (i ? "x" : "") << torus.periods()[i];
  return os.str();
}

// p_t(x, y) from spectral data without forming the matrix.
double kernelEntry(const SpectralData& s, const Eigen::VectorXd& decay, int x, int y) {
  return (s.eigenvectors().row(x).transpose().cwiseProduct(decay)).dot(s.eigenvectors().row(y).transpose());
}

void checkPerturbation(const DiscreteManifold& m, const SpectralData& perturbed, const EstimateParams& params) {
  if (!perturbed.potential()) throw InputError("perturbed spectral data must carry the potential -2(a-1) rho_-");
  const ScalarField expected = -2.0 * (params.a - 1.0) * rho_minus(m);
  const double scale = std::max(1.0, expected.cwiseAbs().maxCoeff());
  if ((*perturbed.potential() - expected).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InputError("perturbed spectral data was not built with W = -2(a-1) rho_-");
}

} // namespace

TolerancePolicy TolerancePolicy::absolute(double value) { return {"absolute", 0.0, 0.0, value}; }

TolerancePolicy TolerancePolicy::mesh(double constant, double meshSize) {
  return {"c*h", constant, meshSize, constant * meshSize};
}

double mesh_tolerance_constant(const std::string& descriptor) {
  // sup |K_h - K| / h on the coarsest standard level of each family, rounded up.
  if (descriptor.starts_with("sphere")) return 0.6;
  if (descriptor.starts_with("torus-rev")) return 0.06;
  if (descriptor.starts_with("flat-torus")) return 0.01;
  return 0.1;
}

TolerancePolicy mesh_tolerance(const DiscreteManifold& m) {
  return TolerancePolicy::mesh(mesh_tolerance_constant(m.descriptor()), m.meanEdgeLength());
}

void VerificationReport::record(const SampleLocation& at, double observed, double bound, double margin) {
  ++samplesTested;
  if (std::isnan(margin)) margin = -std::numeric_limits<double>::infinity();
  if (margin < worstMargin) {
    worstMargin = margin;
    worstLocation = at;
  }
  samples.push_back({at, observed, bound, margin});
}

void VerificationReport::finish() {
  if (samplesTested <= 0) throw NumericalError(checkName + ": no samples were tested");
  passed = worstMargin >= -tolerance.value;
  if (passed && worstMargin < 0.0) notes.push_back("violation below tolerance: pass with note");
}

ScalarField q_field(const ScalarField& u, const ScalarField& gradSquared, const ScalarField& dudt, double alpha,
                    const ScalarField& jValues) {
  if (u.size() != gradSquared.size() || u.size() != dudt.size() || u.size() != jValues.size())
    throw InputError("Q field inputs differ in length");
  return (alpha * jValues.array() * gradSquared.array() / u.array().square() - dudt.array() / u.array()).matrix();
}

VerificationReport check_gradient_estimate(const DiscreteManifold& m, const SpectralData& heat, const ScalarField& u0,
                                           const EstimateParams& params, const std::vector<double>& timeGrid) {
  requireTimes(timeGrid, false);
  if (heat.potential()) throw InputError("gradient estimate needs the unperturbed heat semigroup");
  if (!(u0.minCoeff() > 0.0)) throw InputError("initial data must be strictly positive");
  auto r = startReport("gradient_estimate", m.descriptor(), params, mesh_tolerance(m));
  double maxTail = 0.0;
  for (double t : timeGrid) {
    const auto evolved = semigroup_apply(heat, u0, t);
    maxTail = std::max(maxTail, evolved.tailBound);
    const ScalarField& u = evolved.values;
    const ScalarField dudt = time_derivative(heat, u0, t);
    const ScalarField g2 = gradient_squared(m, u);
    const double j = j_lower(t, params);
    const double rhs = liyau_rhs(t, params);
    for (int x = 0; x < m.vertexCount(); ++x) {
      if (!(u[x] > kPositivityFloor)) {
        ++r.samplesSkipped;
        continue;
      }
      const double q = params.alpha * j * g2[x] / (u[x] * u[x]) - dudt[x] / u[x];
      r.record({x, -1, t, 0.0}, q, rhs, rhs - q);
    }
  }
  r.metrics["max_tail_bound"] = maxTail;
  r.metrics["negative_cotan_weights"] = m.negativeCotanWeights();
  r.finish();
  return r;
}

VerificationReport check_gradient_estimate(const AnalyticFlatTorus& torus, const FourierSolution& u,
                                           const EstimateParams& params, const std::vector<double>& timeGrid) {
  requireTimes(timeGrid, false);
  if (!(u.minimumBound() > 0.0)) throw InputError("Fourier solution is not guaranteed positive");
  auto r = startReport("gradient_estimate", describeTorus(torus), params, TolerancePolicy::absolute(1e-8));
  const auto points = torus.gridPoints();
  for (double t : timeGrid) {
    const double j = j_lower(t, params);
    const double rhs = liyau_rhs(t, params);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto x = view(points[i]);
      const double value = u.value(x, t);
      if (!(value > kPositivityFloor)) {
        ++r.samplesSkipped;
        continue;
      }
      const double q = params.alpha * j * u.gradient(x, t).squaredNorm() / (value * value) - u.timeDerivative(x, t) / value;
      r.record({static_cast<int>(i), -1, t, 0.0}, q, rhs, rhs - q);
    }
  }
  r.finish();
  return r;
}

VerificationReport check_J_bounds(const DiscreteManifold& m, const SpectralData& perturbed,
                                  const EstimateParams& params, const std::vector<double>& timeGrid) {
  requireTimes(timeGrid, true);
  checkPerturbation(m, perturbed, params);
  auto r = startReport("J_bounds", m.descriptor(), params, mesh_tolerance(m));
  const ScalarField ones = ScalarField::Ones(m.vertexCount());
  const double power = -1.0 / (params.a - 1.0);
  double minW = std::numeric_limits<double>::infinity(), maxW = -minW, maxTail = 0.0;
  double worstLower = std::numeric_limits<double>::infinity();
  for (double t : timeGrid) {
    const auto evolved = semigroup_apply(perturbed, ones, t);
    maxTail = std::max(maxTail, evolved.tailBound);
    const ScalarField& w = evolved.values;
    const double j = j_lower(t, params);
    for (int x = 0; x < m.vertexCount(); ++x) {
      minW = std::min(minW, w[x]);
      maxW = std::max(maxW, w[x]);
      if (!(w[x] > 0.0)) {
        ++r.samplesSkipped;
        continue;
      }
      const double J = std::pow(w[x], power);
      worstLower = std::min(worstLower, J - j);
      r.record({x, -1, t, 0.0}, J, j, std::min(J - j, 1.0 - J));
    }
  }
  r.metrics["min_w"] = minW;
  r.metrics["max_w"] = maxW;
  r.metrics["worst_lower_slack"] = worstLower;
  r.metrics["max_tail_bound"] = maxTail;
  r.finish();
  return r;
}

VerificationReport check_schrodinger_norm(const DiscreteManifold& m, const SpectralData& perturbed,
                                          const EstimateParams& params, const std::vector<double>& timeGrid) {
  requireTimes(timeGrid, true);
  checkPerturbation(m, perturbed, params);
  auto r = startReport("schrodinger_norm", m.descriptor(), params, mesh_tolerance(m));
  double maxGap = 0.0, maxDefect = 0.0;
  int matrixSamples = 0;
  const bool everyTime = perturbed.pointCount() <= kEveryTimeKernelPoints;
  for (std::size_t i = 0; i < timeGrid.size(); ++i) {
    const double t = timeGrid[i];
    OperatorNorms norms;
    // Large meshes form the N x N kernel only at the ends of the grid; elsewhere the
    // row-sum witness |e^{-tH} 1|_inf is the norm because the kernel is nonnegative.
    const bool sampled = everyTime || i == 0 || i + 1 == timeGrid.size();
    const bool dense = sampled && perturbed.pointCount() <= kDenseKernelCap &&
                       (perturbed.isComplete() || t > perturbed.kernelFloor());
    if (dense) {
      const KernelMatrix k = kernel(perturbed, t);
      norms = op_norms(k, perturbed.weights());
      maxGap = std::max(maxGap, std::abs(norms.norm11 - norms.normInfInf));
      maxDefect = std::max(maxDefect, k.positivityDefect());
      ++matrixSamples;
    } else {
      norms = op_norms_matrix_free(perturbed, t);
    }
    const Bound bound = schrodinger_norm_bound(t, params);
    r.record({-1, -1, t, 0.0}, norms.normInfInf, bound.value, bound.value - norms.normInfInf);
  }
  r.metrics["max_duality_gap"] = maxGap;
  r.metrics["max_positivity_defect"] = maxDefect;
  r.metrics["matrix_norm_samples"] = matrixSamples;
  if (matrixSamples < static_cast<int>(timeGrid.size()))
    r.notes.push_back("times without a formed kernel use the row-sum witness |e^{-tH} 1|_inf");
  r.finish();
  return r;
}

std::vector<std::pair<int, int>> harnack_pairs(const DiscreteManifold& m, std::uint64_t seed, int sources,
                                               int targets) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, m.vertexCount() - 1);
  std::vector<std::pair<int, int>> pairs;
  for (int s : farthest_point_samples(m, sources)) {
    for (int k = 0; k < targets; ++k) pairs.emplace_back(s, pick(rng));
  }
  return pairs;
}

std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> harnack_pairs(const AnalyticFlatTorus& torus,
                                                                      std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = torus.dimension();
  auto draw = [&] {
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) p[i] = torus.periods()[i] * unit(rng);
    return p;
  };
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs;
  pairs.reserve(count);
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd x = draw();
    Eigen::VectorXd y = draw();
    pairs.emplace_back(std::move(x), std::move(y));
  }
  return pairs;
}

VerificationReport check_harnack(const DiscreteManifold& m, const SpectralData& heat, const ScalarField& u0,
                                 const EstimateParams& params, const std::vector<std::pair<int, int>>& pairs,
                                 const std::vector<HarnackTimes>& times, double distanceSlack) {
  if (pairs.empty() || times.empty()) throw InputError("Harnack check needs pairs and time triples");
  if (heat.potential()) throw InputError("Harnack check needs the unperturbed heat semigroup");
  if (!(u0.minCoeff() > 0.0)) throw InputError("initial data must be strictly positive");
  auto r = startReport("harnack", m.descriptor(), params, mesh_tolerance(m));

  std::map<int, ScalarField> distances;
  for (const auto& [x, y] : pairs) {
    if (!distances.contains(x)) distances.emplace(x, geodesic_distance(m, x));
  }
  double worstShrunk = std::numeric_limits<double>::infinity();
  for (const auto& tt : times) {
    harnack_factor(0.0, tt.t1, tt.t2, tt.T, params); // validates the ordering
    const ScalarField u1 = semigroup_apply(heat, u0, tt.t1).values;
    const ScalarField u2 = semigroup_apply(heat, u0, tt.t2).values;
    for (const auto& [s, target] : pairs) {
      const double d = distances.at(s)[target];
      // Both orientations: the earlier time sits at either end of the pair.
      for (const auto& [x, y] : {std::pair{s, target}, std::pair{target, s}}) {
        if (!(u2[y] > kPositivityFloor) || !(u1[x] > kPositivityFloor)) {
          ++r.samplesSkipped;
          continue;
        }
        const Bound f = harnack_factor(d, tt.t1, tt.t2, tt.T, params);
        const double rhs = u2[y] * f.value;
        const double margin = f.overflow ? 1.0 : 1.0 - u1[x] / rhs;
        r.record({x, y, tt.t1, tt.t2}, u1[x], rhs, margin);
        const Bound shrunk = harnack_factor(d * (1.0 - distanceSlack), tt.t1, tt.t2, tt.T, params);
        worstShrunk = std::min(worstShrunk, shrunk.overflow ? 1.0 : 1.0 - u1[x] / (u2[y] * shrunk.value));
      }
    }
  }
  r.metrics["distance_slack"] = distanceSlack;
  r.metrics["worst_margin_shrunk_distance"] = worstShrunk;
  r.finish();
  return r;
}

VerificationReport check_harnack(const AnalyticFlatTorus& torus, const FourierSolution& u,
                                 const EstimateParams& params,
                                 const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& pairs,
                                 const std::vector<HarnackTimes>& times) {
  if (pairs.empty() || times.empty()) throw InputError("Harnack check needs pairs and time triples");
  if (!(u.minimumBound() > 0.0)) throw InputError("Fourier solution is not guaranteed positive");
  auto r = startReport("harnack", describeTorus(torus), params, TolerancePolicy::absolute(1e-8));
  for (const auto& tt : times) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& [x, y] = pairs[i];
      const double d = torus.distance(view(x), view(y));
      const Bound f = harnack_factor(d, tt.t1, tt.t2, tt.T, params);
      const double lhs = u.value(view(x), tt.t1);
      const double rhs = u.value(view(y), tt.t2) * f.value;
      const double margin = f.overflow ? 1.0 : 1.0 - lhs / rhs;
      r.record({static_cast<int>(i), static_cast<int>(i), tt.t1, tt.t2}, lhs, rhs, margin);
    }
  }
  r.finish();
  return r;
}

VerificationReport check_heat_kernel_bounds(const DiscreteManifold& m, const SpectralData& heat,
                                            const EstimateParams& params, double diam,
                                            const std::vector<double>& timeGrid,
                                            const std::vector<std::pair<int, int>>& pairs) {
  requireTimes(timeGrid, false);
  if (heat.potential()) throw InputError("heat-kernel bounds need the unperturbed heat semigroup");
  const double floor = heat.kernelFloor();
  std::vector<double> usable;
  for (double t : timeGrid) {
    if (t > floor && t < params.beta / 2.0) usable.push_back(t);
  }
  if (usable.empty()) {
    std::ostringstream os;
    os << "no grid time lies in (t_min, beta/2) = (" << floor << ", " << params.beta / 2.0
       << "); increase the mode count K or use larger times";
    throw InputError(os.str());
  }
  auto r = startReport("heat_kernel_bounds", m.descriptor(), params, mesh_tolerance(m));
  r.samplesSkipped = static_cast<int>(timeGrid.size() - usable.size());

  std::map<int, ScalarField> distances;
  for (const auto& [x, y] : pairs) {
    if (!distances.contains(x)) distances.emplace(x, geodesic_distance(m, x));
  }
  double previousDiag = std::numeric_limits<double>::infinity();
  bool diagDecreasing = true;
  for (double t : usable) {
    const ScalarField diag = kernel_diagonal(heat, t);
    Eigen::Index at = 0;
    const double maxDiag = diag.maxCoeff(&at);
    if (maxDiag > previousDiag) diagDecreasing = false;
    previousDiag = maxDiag;
    const auto on = heat_kernel_bounds(t, 0.0, params, diam, m.volume());
    r.record({static_cast<int>(at), static_cast<int>(at), t, t}, maxDiag, on.onDiag, 1.0 - maxDiag / on.onDiag);

    const Eigen::VectorXd decay = (-t * heat.eigenvalues().array()).exp().matrix();
    for (const auto& [x, y] : pairs) {
      const double d = std::min(distances.at(x)[y], diam);
      const auto off = heat_kernel_bounds(t, d, params, diam, m.volume());
      const double p = kernelEntry(heat, decay, x, y);
      r.record({x, y, t, t}, p, off.offDiag, off.overflow ? 1.0 : 1.0 - p / off.offDiag);
    }
  }
  r.metrics["kernel_floor"] = floor;
  r.metrics["max_diagonal_decreasing"] = diagDecreasing ? 1.0 : 0.0;
  r.finish();
  return r;
}

VerificationReport check_heat_kernel_bounds(const AnalyticFlatTorus& torus, const EstimateParams& params,
                                            const std::vector<double>& timeGrid,
                                            const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& pairs) {
  requireTimes(timeGrid, false);
  auto r = startReport("heat_kernel_bounds", describeTorus(torus), params, TolerancePolicy::absolute(1e-8));
  const double diam = torus.diameter();
  for (double t : timeGrid) {
    if (!(t < params.beta / 2.0)) {
      ++r.samplesSkipped;
      continue;
    }
    const double diag = torus.heatKernelDiagonal(t);
    const auto on = heat_kernel_bounds(t, 0.0, params, diam, torus.volume());
    r.record({-1, -1, t, t}, diag, on.onDiag, 1.0 - diag / on.onDiag);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& [x, y] = pairs[i];
      const double d = std::min(torus.distance(view(x), view(y)), diam);
      const auto off = heat_kernel_bounds(t, d, params, diam, torus.volume());
      const double p = torus.heatKernel(t, view(x), view(y));
      r.record({static_cast<int>(i), static_cast<int>(i), t, t}, p, off.offDiag,
               off.overflow ? 1.0 : 1.0 - p / off.offDiag);
    }
  }
  r.finish();
  return r;
}

int surface_betti_number(const DiscreteManifold& m) { return 2 - m.eulerCharacteristic(); }

VerificationReport check_betti(const DiscreteManifold& m, const SpectralData& withRho, const EstimateParams& params,
                               double diam, int knownB1) {
  if (!withRho.potential()) throw InputError("Betti check needs spectral data built with W = rho");
  auto r = startReport("betti", m.descriptor(), params, mesh_tolerance(m));
  const double half = params.beta / 2.0;
  const ScalarField diag = kernel_diagonal(withRho, half);
  const double norm1Inf = diag.maxCoeff();
  const double trace = (-half * withRho.eigenvalues().array()).exp().sum();
  const double measured = params.n * m.volume() * norm1Inf;
  const BettiBound bound = betti_bound(params, diam);

  r.record({-1, -1, half, 0.0}, knownB1, measured, measured - knownB1);
  r.record({-1, -1, half, 0.0}, knownB1, bound.value, bound.value - knownB1);
  r.metrics["trace"] = trace;
  r.metrics["n_times_trace"] = params.n * trace;
  r.metrics["vol_norm_1_inf"] = m.volume() * norm1Inf;
  r.metrics["n_vol_norm_1_inf"] = measured;
  r.metrics["betti_bound"] = bound.value;
  r.metrics["known_b1"] = knownB1;
  if (!withRho.isComplete() && half <= withRho.kernelFloor())
    r.notes.push_back("beta/2 is below the kernel floor: truncated trace and diagonal are lower estimates");
  if (bound.overflow) r.notes.push_back("Betti bound overflowed double range (reported as +inf)");
  if (!bound.dimensionHypothesis) r.notes.push_back("Betti bound is proven for n >= 3; evaluated here with n < 3");
  r.finish();
  return r;
}

VerificationReport check_betti(const AnalyticFlatTorus& torus, const EstimateParams& params, int knownB1) {
  if (params.n != torus.dimension()) throw InputError("parameter dimension differs from the torus dimension");
  auto r = startReport("betti", describeTorus(torus), params, TolerancePolicy::absolute(1e-8));
  const double half = params.beta / 2.0;
  // Vol p_t(x,x) = prod_i L_i theta_i(t) = prod_i (1 + e_i); keep the excess e_i explicit.
  double logSum = 0.0;
  for (double L : torus.periods()) {
    const double rate = 4.0 * std::numbers::pi * std::numbers::pi * half / (L * L);
    double excess = 0.0;
    for (int k = 1;; ++k) {
      const double term = 2.0 * std::exp(-rate * k * k);
      excess += term;
      if (term <= 1e-18 * excess || term == 0.0) break;
    }
    logSum += std::log1p(excess);
  }
  const double volNormExcess = std::expm1(logSum); // Vol |e^{-beta/2 Delta}|_{1,inf} - 1
  const int n = params.n;
  const double measuredMargin = (n - knownB1) + n * volNormExcess;
  const BettiBound bound = betti_bound(params, torus.diameter());

  r.record({-1, -1, half, 0.0}, knownB1, n * (1.0 + volNormExcess), measuredMargin);
  r.record({-1, -1, half, 0.0}, knownB1, bound.value, bound.value - knownB1);
  r.metrics["vol_norm_1_inf"] = 1.0 + volNormExcess;
  r.metrics["vol_norm_1_inf_excess"] = volNormExcess;
  r.metrics["n_vol_norm_1_inf"] = n * (1.0 + volNormExcess);
  r.metrics["trace"] = 1.0 + volNormExcess;
  r.metrics["betti_bound"] = bound.value;
  r.metrics["known_b1"] = knownB1;
  if (!bound.dimensionHypothesis) r.notes.push_back("Betti bound is proven for n >= 3; evaluated here with n < 3");
  r.finish();
  return r;
}

VerificationReport check_gauss_bonnet(const DiscreteManifold& m) {
  auto r = startReport("gauss_bonnet", m.descriptor(), std::nullopt, TolerancePolicy::absolute(0.0));
  const double residual = std::abs(m.angleDefects().sum() - 2.0 * std::numbers::pi * m.eulerCharacteristic());
  r.record({-1, -1, 0.0, 0.0}, residual, 1e-8, 1e-8 - residual);
  r.metrics["residual"] = residual;
  r.metrics["euler_characteristic"] = m.eulerCharacteristic();
  r.finish();
  return r;
}

ConvergenceTable convergence_study(const std::function<DiscreteManifold(int)>& builder, const std::vector<int>& levels,
                                   const std::function<VerificationReport(const DiscreteManifold&)>& check) {
  if (levels.size() < 3) throw InputError("a convergence study needs at least three levels");
  ConvergenceTable table;
  for (int level : levels) {
    const DiscreteManifold m = builder(level);
    const VerificationReport rep = check(m);
    table.checkName = rep.checkName;
    ConvergenceRow row;
    row.level = level;
    row.meshSize = m.meanEdgeLength();
    row.worstMargin = rep.worstMargin;
    row.violation = std::max(0.0, -rep.worstMargin);
    row.metrics = rep.metrics;
    table.rows.push_back(std::move(row));
  }
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& prev = table.rows[i - 1];
    const auto& cur = table.rows[i];
    if (cur.violation > prev.violation) table.violationNonincreasing = false;
    if (prev.violation > 0.0 && cur.violation > 0.0)
      table.empiricalOrders.push_back(std::log(prev.violation / cur.violation) / std::log(prev.meshSize / cur.meshSize));
  }
  return table;
}

} // namespace katolab
