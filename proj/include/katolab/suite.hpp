#pragma once

#include "katolab/estimates.hpp"
#include "katolab/flat_torus.hpp"
#include "katolab/kato.hpp"
#include "katolab/manifold.hpp"
#include "katolab/verify.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace katolab {

/// A manifold named on the command line:
///   flat-torus:1x1[,res=32]   sphere:r=1,subdiv=3   torus-rev:R=2,r=1,res=64
/// Any builder spec also accepts scale=s (all lengths times s).
struct ManifoldSpec {
  enum class Family { FlatTorus, Sphere, TorusOfRevolution, File };
  Family family = Family::FlatTorus;
  std::vector<double> periods{1.0, 1.0};
  int resolution = 0;
  double radius = 1.0;
  int subdivisions = 3;
  double majorRadius = 2.0;
  double minorRadius = 1.0;
  std::string path;
  double metricScale = 1.0;

  std::string descriptor() const;
};

ManifoldSpec parse_manifold_spec(const std::string& text);
ManifoldSpec file_manifold_spec(const std::string& path);

/// Mesh and, for flat tori, the exact analytic twin. Flat tori of dimension
/// other than 2 have no mesh.
struct Manifold {
  std::optional<DiscreteManifold> mesh;
  std::optional<AnalyticFlatTorus> analytic;
};

Manifold build_manifold(const ManifoldSpec& spec);

/// Log-spaced beta grid from 1e-3 to 2 (24 points).
std::vector<double> default_beta_grid();

/// "a:b:count" -> count log-spaced values in [a, b] (linear if a = 0 is not allowed).
std::vector<double> parse_beta_grid(const std::string& text);

/// Mode count used by the suites: the full basis up to 2600 points, 500 above.
int suite_mode_count(int pointCount);

/// u0 = 1 + eps mix / |mix|_inf with mix = phi_1 + phi_2 / 2 + phi_3 / 4 and eps = 0.5.
ScalarField manufactured_initial_data(const SpectralData& heat);

struct SuiteOptions {
  /// all | gradient | J | norm | harnack | heat-kernel | betti | gauss-bonnet, or a comma-separated list
  std::string suite = "all";
  double alpha = 0.5;
  std::optional<int> n;
  std::optional<double> beta;
  std::vector<double> betaGrid;
  int modeCount = 0;
  std::uint64_t seed = 1;
  KatoOptions kato;
  /// Doublings of the metric tried when no grid beta is admissible.
  int maxMetricDoublings = 6;
};

struct SuiteResult {
  std::string manifold;
  std::optional<KatoCertificate> certificate;
  std::optional<EstimateParams> params;
  double metricScale = 1.0;
  int modeCount = 0;
  std::vector<VerificationReport> reports;
  std::vector<std::string> notes;

  bool passed() const;
  const VerificationReport* find(const std::string& checkName) const;
};

/// Runs the selected checks on an analytic flat torus or a mesh.
SuiteResult run_suite(const ManifoldSpec& spec, const SuiteOptions& options);
/// Same on an already built mesh (no metric-scaling fallback beyond the options).
SuiteResult run_mesh_suite(const DiscreteManifold& mesh, const SuiteOptions& options);
SuiteResult run_analytic_suite(const AnalyticFlatTorus& torus, const SuiteOptions& options);

struct SweepRow {
  double alpha = 0.0;
  std::optional<KatoCertificate> certificate;
  double liyauAtHalfBeta = 0.0;
  double bettiBound = 0.0;
  bool bettiOverflow = false;
};

/// Fixed grid alpha = 0.1, ..., 0.9: best admissible beta, the gradient-estimate
/// constant at t = beta/2 and the Betti bound B.
std::vector<SweepRow> alpha_sweep(const SpectralData& heat, const ScalarField& rhoMinus, double diam,
                                  const std::vector<double>& betaGrid, int n = 2, const KatoOptions& options = {});

} // namespace katolab
