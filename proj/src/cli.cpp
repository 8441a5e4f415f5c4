#include "katolab/cli.hpp"

#include "katolab/error.hpp"
#include "katolab/estimates.hpp"
#include "katolab/kato.hpp"
#include "katolab/mesh_io.hpp"
#include "katolab/report.hpp"
#include "katolab/spectral.hpp"
#include "katolab/suite.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

namespace katolab {

namespace {

struct RunConfig {
  std::string manifold;
  std::string meshFile;
  double alpha = 0.5;
  int n = 2;
  std::optional<int> verifyN;
  std::optional<double> beta;
  std::string betaGrid;
  int modeCount = 0;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  std::string out;
  std::string suite = "all";
  std::string csv;
  // constants
  double b = 0.0;
  std::optional<double> diam;
  double vol = 1.0;
  std::optional<double> t;
  // mesh
  std::string writeOff;
  std::string spectrum;
  // kato
  std::optional<double> planted;
};

void writeDocument(const Json& doc, const std::string& out) {
  if (out.empty()) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream file(out);
  if (!file) throw InputError("cannot open output file '" + out + "'");
  file << doc.dump(2) << '\n';
  if (!file) throw InputError("failed writing '" + out + "'");
}

ManifoldSpec manifoldOf(const RunConfig& c) {
  if (!c.manifold.empty() && !c.meshFile.empty()) throw InputError("give either --manifold or --mesh-file, not both");
  if (!c.meshFile.empty()) return file_manifold_spec(c.meshFile);
  if (c.manifold.empty()) throw InputError("a manifold is required (--manifold or --mesh-file)");
  return parse_manifold_spec(c.manifold);
}

std::vector<double> betaGridOf(const RunConfig& c) {
  if (c.beta && !c.betaGrid.empty()) throw InputError("give either --beta or --beta-grid, not both");
  if (c.beta) return {*c.beta};
  return c.betaGrid.empty() ? default_beta_grid() : parse_beta_grid(c.betaGrid);
}

KatoOptions katoOf(const RunConfig& c) {
  if (!(c.tol > 0.0 && c.tol < 1.0)) throw InputError("--tol must lie in (0, 1)");
  KatoOptions o;
  o.relativeTolerance = c.tol;
  return o;
}

void validateCommon(const RunConfig& c) {
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw InputError("--alpha must lie in (0, 1)");
  if (c.beta && !(*c.beta > 0.0)) throw InputError("--beta must be positive");
  if (c.modeCount < 0) throw InputError("--K must be nonnegative");
}

/// Heat spectrum and the potential fed to the Kato integral for kato/sweep.
struct KatoInputs {
  std::optional<SpectralData> heat;
  ScalarField potential;
  double diam = 0.0;
  std::string name;
  int n = 2;
};

KatoInputs katoInputs(const RunConfig& c) {
  const Manifold built = build_manifold(manifoldOf(c));
  KatoInputs in;
  if (built.mesh) {
    const DiscreteManifold& m = *built.mesh;
    const int k = c.modeCount > 0 ? c.modeCount : suite_mode_count(m.vertexCount());
    in.heat.emplace(eigendecompose(m, std::nullopt, k));
    in.potential = c.planted ? ScalarField::Constant(m.vertexCount(), *c.planted) : rho_minus(m);
    in.diam = diameter(m);
    in.name = m.descriptor();
  } else {
    const AnalyticFlatTorus& torus = *built.analytic;
    in.heat.emplace(eigendecompose(torus, 0.0, c.modeCount));
    in.potential = ScalarField::Constant(in.heat->pointCount(), c.planted.value_or(0.0));
    in.diam = torus.diameter();
    in.name = "flat-torus-analytic";
    in.n = torus.dimension();
  }
  return in;
}

int cmdMesh(const RunConfig& c) {
  const Manifold built = build_manifold(manifoldOf(c));
  if (!built.mesh) throw InputError("flat tori of dimension other than 2 have no mesh");
  const DiscreteManifold& m = *built.mesh;
  Json body{{"mesh", mesh_summary(m)}};
  if (!c.writeOff.empty()) {
    write_off(c.writeOff, m);
    body["off_file"] = c.writeOff;
  }
  if (!c.spectrum.empty()) {
    const SpectralData s = eigendecompose(m, std::nullopt, c.modeCount);
    std::ofstream file(c.spectrum);
    if (!file) throw InputError("cannot open spectrum file '" + c.spectrum + "'");
    file << spectral_to_json(s).dump() << '\n';
    body["spectrum_file"] = c.spectrum;
  }
  writeDocument(make_document("mesh", body), c.out);
  return kExitPassed;
}

int cmdKato(const RunConfig& c) {
  validateCommon(c);
  const auto grid = betaGridOf(c);
  const KatoInputs in = katoInputs(c);
  const auto certs = kato_scan(*in.heat, in.potential, c.alpha, grid, in.n, katoOf(c));
  Json table = Json::array();
  std::optional<KatoCertificate> best;
  for (const auto& cert : certs) {
    table.push_back(to_json(cert));
    if (cert.admissible) best = cert;
  }
  Json body{{"manifold", in.name},
            {"alpha", json_number(c.alpha)},
            {"potential", c.planted ? "planted-constant" : "rho_minus"},
            {"mode_count", in.heat->modeCount()},
            {"table", table},
            {"best", best ? to_json(*best) : Json(nullptr)}};
  writeDocument(make_document("kato", body), c.out);
  return kExitPassed;
}

int cmdConstants(const RunConfig& c) {
  validateCommon(c);
  if (!c.beta) throw InputError("constants needs --beta");
  const EstimateParams p = EstimateParams::make(c.n, c.alpha, *c.beta, c.b);
  const double t = c.t.value_or(p.beta / 4.0);
  Json body{{"params", to_json(p)},
            {"t", json_number(t)},
            {"j_lower_at_t", json_number(j_lower(t, p))},
            {"gradient_estimate_rhs_at_t", json_number(liyau_rhs(t, p))},
            {"harnack_lambda_at_T_equals_beta", json_number(harnack_lambda(p.beta, p))},
            {"schrodinger_norm_bound_at_t", json_number(schrodinger_norm_bound(t, p).value)}};
  if (c.diam) {
    const Bound c1 = heat_kernel_constant(p, *c.diam);
    body["diameter"] = json_number(*c.diam);
    body["heat_kernel_constant_C1"] = json_number(c1.value);
    body["heat_kernel_exponent"] = json_number(p.baseExponent() / std::sqrt(1.0 - p.b));
    if (t < p.beta / 2.0 && t > 0.0) {
      const auto hk = heat_kernel_bounds(t, 0.0, p, *c.diam, c.vol);
      body["volume"] = json_number(c.vol);
      body["heat_kernel_on_diagonal_bound_at_t"] = json_number(hk.onDiag);
    }
    const BettiBound B = betti_bound(p, *c.diam);
    body["betti_bound"] = json_number(B.value);
    body["betti_bound_overflow"] = B.overflow;
    body["betti_dimension_hypothesis"] = B.dimensionHypothesis;
  }
  writeDocument(make_document("constants", body), c.out);
  return kExitPassed;
}

int cmdVerify(const RunConfig& c) {
  validateCommon(c);
  SuiteOptions o;
  o.suite = c.suite;
  o.alpha = c.alpha;
  o.n = c.verifyN;
  o.beta = c.beta;
  if (!c.betaGrid.empty()) o.betaGrid = parse_beta_grid(c.betaGrid);
  o.modeCount = c.modeCount;
  o.seed = c.seed;
  o.kato = katoOf(c);
  const SuiteResult result = run_suite(manifoldOf(c), o);
  writeDocument(make_document("verify", to_json(result)), c.out);
  if (!c.csv.empty()) {
    std::ofstream file(c.csv);
    if (!file) throw InputError("cannot open CSV file '" + c.csv + "'");
    bool header = true;
    for (const auto& r : result.reports) {
      write_samples_csv(file, r, header);
      header = false;
    }
  }
  for (const auto& r : result.reports) {
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.checkName << " worst_margin=" << r.worstMargin
              << " tolerance=" << r.tolerance.value << '\n';
  }
  return result.passed() ? kExitPassed : kExitViolations;
}

int cmdSweep(const RunConfig& c) {
  if (c.modeCount < 0) throw InputError("--K must be nonnegative");
  const auto grid = betaGridOf(c);
  const KatoInputs in = katoInputs(c);
  Json rows = Json::array();
  for (const auto& row : alpha_sweep(*in.heat, in.potential, in.diam, grid, in.n, katoOf(c))) rows.push_back(to_json(row));
  Json body{{"manifold", in.name}, {"diameter", json_number(in.diam)}, {"rows", rows}};
  writeDocument(make_document("sweep", body), c.out);
  return kExitPassed;
}

std::string scalarText(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw InputError("config values must be strings, numbers or booleans");
}

/// Expands --config FILE into ordinary arguments placed before the remaining
/// command-line arguments, so explicit flags win.
std::vector<std::string> expandConfig(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw InputError("--config needs a file path");
      path = args[++i];
    } else if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return args;
  std::ifstream file(*path);
  if (!file) throw InputError("cannot open config file '" + *path + "'");
  Json cfg;
  try {
    cfg = Json::parse(file);
  } catch (const Json::exception& e) {
    throw InputError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw InputError("config file must hold a JSON object");

  static const std::vector<std::string> commands{"mesh", "kato", "constants", "verify", "sweep"};
  const auto commandAt = std::find_if(rest.begin(), rest.end(), [](const std::string& a) {
    return std::find(commands.begin(), commands.end(), a) != commands.end();
  });
  std::string command;
  if (commandAt != rest.end()) {
    command = *commandAt;
    rest.erase(commandAt);
  } else if (cfg.contains("command")) {
    command = scalarText(cfg["command"]);
  } else {
    throw InputError("no subcommand on the command line or in the config file");
  }
  std::vector<std::string> out{command};
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") continue;
    out.push_back("--" + key);
    out.push_back(scalarText(value));
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

void addManifoldOptions(CLI::App* sub, RunConfig& c) {
  sub->add_option("--manifold", c.manifold,
                  "Built-in manifold: flat-torus:LxL[,res=N] (periods in length units), "
                  "sphere:r=R,subdiv=S (radius in length units), torus-rev:R=2,r=1,res=64 (radii in length units); "
                  "append scale=s to multiply all lengths by s");
  sub->add_option("--mesh-file", c.meshFile, "Closed oriented triangle mesh in OFF or OBJ format (length units)");
  sub->add_option("--K", c.modeCount, "Number of eigenpairs (count; 0 = full basis up to 2600 vertices, else 500)");
}

void addOutput(CLI::App* sub, RunConfig& c) {
  sub->add_option("--out", c.out, "Write the JSON report to this path (default: stdout)");
}

void addAlpha(CLI::App* sub, RunConfig& c) {
  sub->add_option("--alpha", c.alpha, "Gradient-estimate parameter alpha (dimensionless, in (0,1))")
      ->capture_default_str();
}

void addBeta(CLI::App* sub, RunConfig& c) {
  sub->add_option("--beta", c.beta, "Kato horizon beta (time units, i.e. length^2)");
  sub->add_option("--beta-grid", c.betaGrid,
                  "Log-spaced beta grid a:b:count (time units; default 1e-3:2:24)");
}

void addTol(CLI::App* sub, RunConfig& c) {
  sub->add_option("--tol", c.tol, "Kato quadrature tolerance relative to beta*|V|_inf (dimensionless)")
      ->capture_default_str();
}

int dispatch(const std::vector<std::string>& rawArgs) {
  const std::vector<std::string> args = expandConfig(rawArgs);
  RunConfig c;
  CLI::App app{"Kato-class curvature bounds on discrete and analytic manifolds", "katolab"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.add_option("--config", "JSON file mirroring the flags of one subcommand (keys without dashes)");

  auto* mesh = app.add_subcommand("mesh", "Build or load a mesh and report its geometry");
  addManifoldOptions(mesh, c);
  mesh->add_option("--write-off", c.writeOff, "Also write the mesh as OFF to this path");
  mesh->add_option("--spectrum", c.spectrum, "Also write eigenvalues and eigenvectors (JSON) to this path");
  addOutput(mesh, c);

  auto* kato = app.add_subcommand("kato", "Kato constant of rho_- over a beta grid with admissibility");
  addManifoldOptions(kato, c);
  addAlpha(kato, c);
  addBeta(kato, c);
  addTol(kato, c);
  kato->add_option("--planted", c.planted, "Use the constant potential V (1/length^2) instead of rho_-");
  addOutput(kato, c);

  auto* constants = app.add_subcommand("constants", "Evaluate every closed-form constant for given parameters");
  constants->add_option("--n", c.n, "Dimension n (count, >= 2)")->capture_default_str();
  addAlpha(constants, c);
  constants->add_option("--beta", c.beta, "Kato horizon beta (time units, i.e. length^2)")->required();
  constants->add_option("--b", c.b, "Kato constant b (dimensionless, 0 <= b < delta/(5-delta))")
      ->capture_default_str();
  constants->add_option("--diam", c.diam, "Diameter (length units); enables heat-kernel and Betti constants");
  constants->add_option("--vol", c.vol, "Volume (length^n) for the on-diagonal heat-kernel bound")
      ->capture_default_str();
  constants->add_option("--t", c.t, "Evaluation time (time units; default beta/4)");
  addOutput(constants, c);

  auto* verify = app.add_subcommand("verify", "Run verification checks and report margins");
  addManifoldOptions(verify, c);
  addAlpha(verify, c);
  verify->add_option("--n", c.verifyN, "Dimension n (count); must match the manifold");
  addBeta(verify, c);
  addTol(verify, c);
  verify->add_option("--seed", c.seed, "Seed for pair sampling (integer)")->capture_default_str();
  verify->add_option("--suite", c.suite, "Comma-separated checks: all, gradient, J, norm, harnack, heat-kernel, betti, gauss-bonnet")
      ->capture_default_str();
  verify->add_option("--csv", c.csv, "Write per-sample margins as CSV to this path");
  addOutput(verify, c);

  auto* sweep = app.add_subcommand("sweep", "Best admissible beta and resulting constants for alpha = 0.1..0.9");
  addManifoldOptions(sweep, c);
  addBeta(sweep, c);
  addTol(sweep, c);
  sweep->add_option("--planted", c.planted, "Use the constant potential V (1/length^2) instead of rho_-");
  addOutput(sweep, c);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  if (*mesh) return cmdMesh(c);
  if (*kato) return cmdKato(c);
  if (*constants) return cmdConstants(c);
  if (*sweep) return cmdSweep(c);
  return cmdVerify(c);
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
  try {
    return dispatch(args);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumericalError;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

} // namespace katolab
