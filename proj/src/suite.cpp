#include "katolab/suite.hpp"

#include "katolab/error.hpp"
#include "katolab/mesh_builders.hpp"
#include "katolab/mesh_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace katolab {

namespace {

constexpr int kCompleteBasisLimit = 2600;
constexpr int kAnalyticCutoff3d = 4;

double parseNumber(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InputError("cannot parse " + what + " from '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw InputError("cannot parse " + what + " from '" + text + "'");
  return v;
}

int parseInt(const std::string& text, const std::string& what) {
  const double v = parseNumber(text, what);
  if (v != std::floor(v)) throw InputError(what + " must be an integer");
  return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = count == 1 ? b : a + (b - a) * i / (count - 1);
  return out;
}

std::vector<double> logspace(double a, double b, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i)
    out[i] = count == 1 ? b : std::exp(std::log(a) + (std::log(b) - std::log(a)) * i / (count - 1));
  return out;
}

std::vector<std::string> suiteNames(const std::string& suite) {
  std::vector<std::string> out;
  std::stringstream in(suite);
  for (std::string name; std::getline(in, name, ',');) out.push_back(name);
  return out;
}

bool wants(const SuiteOptions& o, const std::string& check) {
  for (const auto& name : suiteNames(o.suite)) {
    if (name == "all" || name == check) return true;
  }
  return false;
}

void validateSuiteName(const std::string& suite) {
  static const std::vector<std::string> names{"all",     "gradient",    "J",     "norm",
                                               "harnack", "heat-kernel", "betti", "gauss-bonnet"};
  const auto requested = suiteNames(suite);
  if (requested.empty()) throw InputError("empty suite selection");
  for (const auto& name : requested) {
    if (std::find(names.begin(), names.end(), name) == names.end())
      throw InputError("unknown suite '" + name +
                       "' (expected all, gradient, J, norm, harnack, heat-kernel, betti or gauss-bonnet)");
  }
}

} // namespace

std::string ManifoldSpec::descriptor() const {
  std::ostringstream os;
  switch (family) {
  case Family::FlatTorus:
    os << "flat-torus:";
    for (std::size_t i = 0; i < periods.size(); ++i) os << (i ? "x" : "") << periods[i];
    if (resolution > 0) os << ",res=" << resolution;
    break;
  case Family::Sphere:
    os << "sphere:r=" << radius << ",subdiv=" << subdivisions;
    break;
  case Family::TorusOfRevolution:
    os << "torus-rev:R=" << majorRadius << ",r=" << minorRadius << ",res=" << resolution;
    break;
  case Family::File:
    os << "file:" << path;
    break;
  }
  if (metricScale != 1.0) os << ",scale=" << metricScale;
  return os.str();
}

ManifoldSpec parse_manifold_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string family = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  ManifoldSpec spec;
  std::map<std::string, std::string> keys;
  std::vector<std::string> positional;
  for (const auto& item : split(rest, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) positional.push_back(item);
    else keys[item.substr(0, eq)] = item.substr(eq + 1);
  }
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = keys.find(key);
    if (it == keys.end()) return std::nullopt;
    std::string v = it->second;
    keys.erase(it);
    return v;
  };
  if (auto s = take("scale")) spec.metricScale = parseNumber(*s, "scale");
  if (!(spec.metricScale > 0.0)) throw InputError("scale must be positive");

  if (family == "flat-torus") {
    spec.family = ManifoldSpec::Family::FlatTorus;
    if (positional.size() > 1) throw InputError("flat-torus takes one period list such as 1x1");
    if (!positional.empty()) {
      spec.periods.clear();
      for (const auto& p : split(positional[0], 'x')) spec.periods.push_back(parseNumber(p, "flat-torus period"));
    }
    if (auto s = take("res")) spec.resolution = parseInt(*s, "res");
    if (spec.periods.size() < 2) throw InputError("flat torus needs at least two periods");
  } else if (family == "sphere") {
    spec.family = ManifoldSpec::Family::Sphere;
    if (auto s = take("r")) spec.radius = parseNumber(*s, "sphere radius");
    if (auto s = take("subdiv")) spec.subdivisions = parseInt(*s, "subdiv");
    if (!positional.empty()) throw InputError("sphere takes key=value parameters (r, subdiv)");
  } else if (family == "torus-rev") {
    spec.family = ManifoldSpec::Family::TorusOfRevolution;
    spec.resolution = 64;
    if (auto s = take("R")) spec.majorRadius = parseNumber(*s, "major radius R");
    if (auto s = take("r")) spec.minorRadius = parseNumber(*s, "minor radius r");
    if (auto s = take("res")) spec.resolution = parseInt(*s, "res");
    if (!positional.empty()) throw InputError("torus-rev takes key=value parameters (R, r, res)");
  } else {
    throw InputError("unknown manifold family '" + family + "' (expected flat-torus, sphere or torus-rev)");
  }
  if (!keys.empty()) throw InputError("unknown manifold parameter '" + keys.begin()->first + "' in '" + text + "'");
  return spec;
}

ManifoldSpec file_manifold_spec(const std::string& path) {
  ManifoldSpec spec;
  spec.family = ManifoldSpec::Family::File;
  spec.path = path;
  return spec;
}

Manifold build_manifold(const ManifoldSpec& spec) {
  Manifold out;
  switch (spec.family) {
  case ManifoldSpec::Family::FlatTorus: {
    std::vector<double> periods = spec.periods;
    for (double& L : periods) L *= spec.metricScale;
    if (periods.size() == 2) {
      const int res = spec.resolution > 0 ? spec.resolution : 32;
      auto ft = build_flat_torus({periods[0], periods[1]}, res);
      out.mesh = std::move(ft.mesh);
      out.analytic = std::move(ft.analytic);
    } else {
      if (spec.resolution > 0) throw InputError("flat tori of dimension other than 2 have no mesh resolution");
      out.analytic = AnalyticFlatTorus(periods, kAnalyticCutoff3d);
    }
    return out;
  }
  case ManifoldSpec::Family::Sphere:
    out.mesh = build_sphere(spec.radius, spec.subdivisions);
    break;
  case ManifoldSpec::Family::TorusOfRevolution:
    out.mesh = build_torus_of_revolution(spec.majorRadius, spec.minorRadius, spec.resolution);
    break;
  case ManifoldSpec::Family::File:
    out.mesh = load_mesh(spec.path);
    break;
  }
  if (spec.metricScale != 1.0) out.mesh = out.mesh->scaled(spec.metricScale);
  return out;
}

std::vector<double> default_beta_grid() { return logspace(1e-3, 2.0, 24); }

std::vector<double> parse_beta_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw InputError("beta grid must look like a:b:count");
  const double a = parseNumber(parts[0], "beta grid start");
  const double b = parseNumber(parts[1], "beta grid end");
  const int count = parseInt(parts[2], "beta grid count");
  if (!(a > 0.0 && b > a) || count < 2) throw InputError("beta grid needs 0 < a < b and count >= 2");
  return logspace(a, b, count);
}

int suite_mode_count(int pointCount) { return pointCount <= kCompleteBasisLimit ? pointCount : 500; }

ScalarField manufactured_initial_data(const SpectralData& heat) {
  if (heat.modeCount() < 4) throw InputError("manufactured initial data needs at least four modes");
  const auto& phi = heat.eigenvectors();
  const ScalarField mix = phi.col(1) + 0.5 * phi.col(2) + 0.25 * phi.col(3);
  const double top = mix.cwiseAbs().maxCoeff();
  if (!(top > 0.0)) throw NumericalError("low eigenmodes vanish identically");
  return (ScalarField::Ones(heat.pointCount()) + (0.5 / top) * mix).eval();
}

bool SuiteResult::passed() const {
  return std::all_of(reports.begin(), reports.end(), [](const VerificationReport& r) { return r.passed; });
}

const VerificationReport* SuiteResult::find(const std::string& checkName) const {
  for (const auto& r : reports) {
    if (r.checkName == checkName) return &r;
  }
  return nullptr;
}

SuiteResult run_analytic_suite(const AnalyticFlatTorus& torus, const SuiteOptions& options) {
  validateSuiteName(options.suite);
  const int n = torus.dimension();
  if (options.n && *options.n != n) throw InputError("--n differs from the flat torus dimension");
  SuiteResult result;
  std::ostringstream name;
  name << "flat-torus-analytic:";
  for (int i = 0; i < n; ++i) name << (i ? "x" : "") << torus.periods()[i];
  result.manifold = name.str();

  // rho = 0, so b = 0 is admissible for every beta.
  const double beta = options.beta.value_or(2.0);
  const EstimateParams params = EstimateParams::make(n, options.alpha, beta, 0.0);
  result.params = params;
  result.certificate = KatoCertificate{beta, 0.0, 0.0, params.threshold(), true};
  result.modeCount = static_cast<int>(torus.modes().size());

  const double L0 = torus.periods()[0];
  std::vector<int> k1(n, 0);
  k1[0] = 1;
  const FourierSolution u(torus, {{torus.mode(std::vector<int>(n, 0), FourierMode::Kind::Constant), 1.0},
                                  {torus.mode(k1, FourierMode::Kind::Cos), 0.5}});
  const auto pairs = harnack_pairs(torus, options.seed, 256);

  if (wants(options, "gradient")) {
    const double scale = L0 * L0;
    result.reports.push_back(check_gradient_estimate(torus, u, params, linspace(0.01 * scale, 1.0 * scale, 100)));
  }
  if (wants(options, "harnack")) {
    const double scale = L0 * L0;
    std::vector<HarnackTimes> times{{0.1 * scale, 0.2 * scale, 0.2 * scale}};
    result.reports.push_back(check_harnack(torus, u, params, pairs, times));
  }
  if (wants(options, "heat-kernel")) {
    std::vector<double> times;
    for (double t : {0.05, 0.1, 0.2, 0.4, 0.9}) times.push_back(t * beta / 2.0);
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> few(pairs.begin(), pairs.begin() + 64);
    result.reports.push_back(check_heat_kernel_bounds(torus, params, times, few));
  }
  if (wants(options, "betti")) result.reports.push_back(check_betti(torus, params, n));
  return result;
}

SuiteResult run_mesh_suite(const DiscreteManifold& input, const SuiteOptions& options) {
  validateSuiteName(options.suite);
  if (options.n && *options.n != 2) throw InputError("meshes are surfaces: --n must be 2");
  SuiteResult result;
  DiscreteManifold m = input;
  const std::vector<double> grid = options.betaGrid.empty() ? default_beta_grid() : options.betaGrid;
  const int modeCount = options.modeCount > 0 ? options.modeCount : suite_mode_count(m.vertexCount());
  result.modeCount = modeCount;

  std::optional<SpectralData> heat;
  ScalarField rho;
  std::optional<KatoCertificate> cert;
  for (int doubling = 0;; ++doubling) {
    heat.emplace(eigendecompose(m, std::nullopt, modeCount));
    rho = rho_minus(m);
    if (options.beta) {
      auto scan = kato_scan(*heat, rho, options.alpha, {*options.beta}, 2, options.kato);
      if (!scan.front().admissible) {
        std::ostringstream os;
        os << "beta=" << *options.beta << " gives b=" << scan.front().b << " (+" << scan.front().quadratureError
           << ") which is not below the threshold " << *scan.front().threshold;
        throw InputError(os.str());
      }
      cert = scan.front();
    } else {
      cert = find_admissible(*heat, rho, options.alpha, grid, 2, options.kato);
    }
    if (cert) break;
    if (doubling >= options.maxMetricDoublings)
      throw NumericalError("no admissible beta on the grid even after metric scaling by " +
                           std::to_string(result.metricScale));
    result.metricScale *= 2.0;
    result.notes.push_back("no admissible beta: metric scaled by 2 (rho_- shrinks by 4)");
    m = input.scaled(result.metricScale);
  }
  result.manifold = m.descriptor();
  result.certificate = cert;
  const EstimateParams params = EstimateParams::make(2, options.alpha, cert->beta, cert->b);
  result.params = params;
  const double beta = params.beta;

  if (wants(options, "gradient")) {
    const ScalarField u0 = manufactured_initial_data(*heat);
    result.reports.push_back(check_gradient_estimate(m, *heat, u0, params, logspace(beta / 100.0, beta, 20)));
  }
  if (wants(options, "J") || wants(options, "norm")) {
    const ScalarField w = -2.0 * (params.a - 1.0) * rho;
    // rho_- = 0 leaves the operator unchanged; reuse the heat spectrum.
    const SpectralData perturbed =
        rho.maxCoeff() > 0.0 ? eigendecompose(m, w, modeCount)
                             : SpectralData(heat->eigenvalues(), heat->eigenvectors(), heat->weights(), w,
                                            heat->isComplete());
    std::vector<double> times;
    for (int k = 1; k <= 20; ++k) times.push_back(beta * k / 20.0);
    if (wants(options, "J")) result.reports.push_back(check_J_bounds(m, perturbed, params, times));
    if (wants(options, "norm")) result.reports.push_back(check_schrodinger_norm(m, perturbed, params, times));
  }
  const bool needPairs = wants(options, "harnack") || wants(options, "heat-kernel");
  const auto pairs = needPairs ? harnack_pairs(m, options.seed) : std::vector<std::pair<int, int>>{};
  if (wants(options, "harnack")) {
    const ScalarField u0 = manufactured_initial_data(*heat);
    std::vector<HarnackTimes> times{{0.05 * beta, 0.1 * beta, 0.1 * beta},
                                    {0.25 * beta, 0.5 * beta, 0.5 * beta},
                                    {0.5 * beta, beta, beta}};
    result.reports.push_back(check_harnack(m, *heat, u0, params, pairs, times));
  }
  std::optional<double> diam;
  if (wants(options, "heat-kernel") || wants(options, "betti")) diam = diameter(m);
  if (wants(options, "heat-kernel")) {
    const std::vector<std::pair<int, int>> few(pairs.begin(), pairs.begin() + std::min<std::size_t>(64, pairs.size()));
    result.reports.push_back(
        check_heat_kernel_bounds(m, *heat, params, *diam, logspace(beta / 100.0, 0.45 * beta, 8), few));
  }
  if (wants(options, "betti")) {
    const SpectralData withRho = eigendecompose(m, m.gaussianCurvature(), modeCount);
    result.reports.push_back(check_betti(m, withRho, params, *diam, surface_betti_number(m)));
  }
  if (wants(options, "gauss-bonnet")) result.reports.push_back(check_gauss_bonnet(m));
  return result;
}

SuiteResult run_suite(const ManifoldSpec& spec, const SuiteOptions& options) {
  const Manifold built = build_manifold(spec);
  if (built.analytic) {
    SuiteResult result = run_analytic_suite(*built.analytic, options);
    if (built.mesh && wants(options, "gauss-bonnet")) result.reports.push_back(check_gauss_bonnet(*built.mesh));
    return result;
  }
  return run_mesh_suite(*built.mesh, options);
}

std::vector<SweepRow> alpha_sweep(const SpectralData& heat, const ScalarField& rhoMinus, double diam,
                                  const std::vector<double>& betaGrid, int n, const KatoOptions& options) {
  std::vector<SweepRow> rows;
  for (int i = 1; i <= 9; ++i) {
    SweepRow row;
    row.alpha = i / 10.0;
    row.certificate = find_admissible(heat, rhoMinus, row.alpha, betaGrid, n, options);
    if (row.certificate) {
      const auto params = EstimateParams::make(n, row.alpha, row.certificate->beta, row.certificate->b);
      row.liyauAtHalfBeta = liyau_rhs(params.beta / 2.0, params);
      const BettiBound B = betti_bound(params, diam);
      row.bettiBound = B.value;
      row.bettiOverflow = B.overflow;
    }
    rows.push_back(row);
  }
  return rows;
}

} // namespace katolab
