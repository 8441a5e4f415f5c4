#pragma once

#include "katolab/estimates.hpp"
#include "katolab/flat_torus.hpp"
#include "katolab/manifold.hpp"
#include "katolab/spectral.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace katolab {

/// Where the worst margin of a check occurred. Unused fields are -1 / NaN.
struct SampleLocation {
  int point = -1;
  int otherPoint = -1;
  double t = 0.0;
  double otherT = 0.0;
};

/// One per-sample row for CSV dumps.
struct SampleRecord {
  SampleLocation at;
  double observed = 0.0;
  double bound = 0.0;
  double margin = 0.0;
};

/// How violations are tolerated. Analytic checks use an absolute 1e-8; mesh
/// checks use c h with c fixed per manifold family and h the mean edge length.
struct TolerancePolicy {
  std::string kind = "absolute";
  double constant = 0.0;
  double meshSize = 0.0;
  double value = 1e-8;

  static TolerancePolicy absolute(double value);
  static TolerancePolicy mesh(double constant, double meshSize);
};

/// Tolerance constant c for a manifold descriptor ("sphere:...", "torus-rev:...", ...).
double mesh_tolerance_constant(const std::string& descriptor);
TolerancePolicy mesh_tolerance(const DiscreteManifold& m);

struct VerificationReport {
  std::string checkName;
  std::string manifold;
  std::optional<EstimateParams> params;
  /// bound - observed in the check's margin convention; negative means violation.
  double worstMargin = 0.0;
  SampleLocation worstLocation;
  int samplesTested = 0;
  int samplesSkipped = 0;
  TolerancePolicy tolerance;
  bool passed = false;
  /// Named auxiliary measurements (tail bounds, duality gaps, Betti quantities, ...).
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;
  std::vector<SampleRecord> samples;

  /// Folds one sample into the running minimum.
  void record(const SampleLocation& at, double observed, double bound, double margin);
  /// Sets `passed` from worstMargin and the tolerance; requires samplesTested > 0.
  void finish();
};

/// Q = alpha j |grad u|^2 / u^2 - d_t u / u, pointwise.
ScalarField q_field(const ScalarField& u, const ScalarField& gradSquared, const ScalarField& dudt, double alpha,
                    const ScalarField& jValues);

/// Gradient estimate on a mesh: u = P_t u0, exact spectral d_t u, FEM |grad u|^2.
/// Margin: liyau_rhs(t) - max_x Q(x, t).
VerificationReport check_gradient_estimate(const DiscreteManifold& m, const SpectralData& heat, const ScalarField& u0,
                                           const EstimateParams& params, const std::vector<double>& timeGrid);

/// Gradient estimate for an exact Fourier solution on a flat torus, sampled on the torus grid.
VerificationReport check_gradient_estimate(const AnalyticFlatTorus& torus, const FourierSolution& u,
                                           const EstimateParams& params, const std::vector<double>& timeGrid);

/// j(t) <= J <= 1 and w >= 1 for w = e^{-t(Delta - 2(a-1) rho_-)} 1 and J = w^{-1/(a-1)}.
/// `perturbed` must carry the potential -2(a-1) rho_-. Margin: min of the three slacks.
VerificationReport check_J_bounds(const DiscreteManifold& m, const SpectralData& perturbed,
                                  const EstimateParams& params, const std::vector<double>& timeGrid);

/// Measured L1 / L-infinity operator norm of the perturbed semigroup against
/// (1/(1-b))^{1+t/beta}. Margin: bound - norm. Duality gaps land in metrics.
VerificationReport check_schrodinger_norm(const DiscreteManifold& m, const SpectralData& perturbed,
                                          const EstimateParams& params, const std::vector<double>& timeGrid);

struct HarnackTimes {
  double t1, t2, T;
};

/// Harnack inequality on mesh vertex pairs with edge-graph distances.
/// Margin: 1 - u(x,t1) / (u(y,t2) F). `distanceSlack` shrinks d for the sensitivity column.
VerificationReport check_harnack(const DiscreteManifold& m, const SpectralData& heat, const ScalarField& u0,
                                 const EstimateParams& params, const std::vector<std::pair<int, int>>& pairs,
                                 const std::vector<HarnackTimes>& times, double distanceSlack = 0.1);

/// Harnack inequality for an exact Fourier solution at sampled point pairs with exact torus distances.
VerificationReport check_harnack(const AnalyticFlatTorus& torus, const FourierSolution& u,
                                 const EstimateParams& params,
                                 const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& pairs,
                                 const std::vector<HarnackTimes>& times);

/// 16 farthest-point sources times 16 seeded random targets.
std::vector<std::pair<int, int>> harnack_pairs(const DiscreteManifold& m, std::uint64_t seed, int sources = 16,
                                               int targets = 16);
/// Uniform random point pairs in the fundamental box.
std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> harnack_pairs(const AnalyticFlatTorus& torus,
                                                                      std::uint64_t seed, int count);

/// On- and off-diagonal heat-kernel bounds on a mesh for t in (t_min, beta/2).
/// Margin: 1 - p / bound (relative).
VerificationReport check_heat_kernel_bounds(const DiscreteManifold& m, const SpectralData& heat,
                                            const EstimateParams& params, double diam,
                                            const std::vector<double>& timeGrid,
                                            const std::vector<std::pair<int, int>>& pairs);

/// Same on the flat torus with the exact theta-series kernel.
VerificationReport check_heat_kernel_bounds(const AnalyticFlatTorus& torus, const EstimateParams& params,
                                            const std::vector<double>& timeGrid,
                                            const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& pairs);

/// b1 <= n Vol |e^{-beta/2 (Delta + rho)}|_{1,inf} and b1 <= B. `withRho` carries W = rho (signed curvature).
VerificationReport check_betti(const DiscreteManifold& m, const SpectralData& withRho, const EstimateParams& params,
                               double diam, int knownB1);

/// Same on a flat torus (rho = 0) with theta-series values.
VerificationReport check_betti(const AnalyticFlatTorus& torus, const EstimateParams& params, int knownB1);

/// First Betti number of a closed orientable surface: 2 - chi.
int surface_betti_number(const DiscreteManifold& m);

/// Gauss-Bonnet residual |sum defects - 2 pi chi| as a report (margin = 1e-8 - residual).
VerificationReport check_gauss_bonnet(const DiscreteManifold& m);

struct ConvergenceRow {
  int level = 0;
  double meshSize = 0.0;
  double worstMargin = 0.0;
  double violation = 0.0; ///< max(0, -worstMargin)
  std::map<std::string, double> metrics;
};

struct ConvergenceTable {
  std::string checkName;
  std::vector<ConvergenceRow> rows;
  /// Violation magnitude never increases with refinement.
  bool violationNonincreasing = true;
  /// log(v_i / v_{i+1}) / log(h_i / h_{i+1}) for consecutive levels with v > 0.
  std::vector<double> empiricalOrders;
};

ConvergenceTable convergence_study(const std::function<DiscreteManifold(int)>& builder, const std::vector<int>& levels,
                                   const std::function<VerificationReport(const DiscreteManifold&)>& check);

} // namespace katolab
