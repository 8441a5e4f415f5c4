#include "katolab/kato.hpp"

#include "katolab/estimates.hpp"
#include "katolab/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace katolab {

namespace {

void requireHeatSemigroup(const SpectralData& heat) {
  if (heat.potential()) throw InputError("Kato quantities need the unperturbed heat semigroup (no potential)");
}

void requireNonnegative(const ScalarField& v) {
  if (!v.allFinite() || v.minCoeff() < 0.0) throw InputError("Kato potential must be finite and nonnegative");
}

} // namespace

double kato_integrand(const SpectralData& heat, const ScalarField& v, double t) {
  if (t == 0.0) return v.maxCoeff();
  return semigroup_apply(heat, v, t).values.maxCoeff();
}

KatoCertificate kato_constant(const SpectralData& heat, const ScalarField& v, double beta,
                              const KatoOptions& options) {
  requireHeatSemigroup(heat);
  requireNonnegative(v);
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  KatoCertificate cert;
  cert.beta = beta;
  const double scale = beta * v.maxCoeff();
  if (scale == 0.0) return cert;

  // Spectral coefficients are fixed; each integrand call is one matrix-vector product.
  const Eigen::VectorXd coeffs = heat.coefficients(v);
  const double vmax = v.maxCoeff();
  auto integrand = [&](double t) {
    if (t == 0.0) return vmax;
    const Eigen::VectorXd decay = (-t * heat.eigenvalues().array()).exp().matrix();
    return (heat.eigenvectors() * coeffs.cwiseProduct(decay)).maxCoeff();
  };
  SimpsonOptions so;
  so.panelBudget = options.panelBudget;
  so.geometricSeeds = options.geometricSeeds;
  const double tol = options.relativeTolerance * scale;
  const auto q = adaptive_simpson(integrand, 0.0, beta, tol, so);
  if (!q.converged) {
    std::ostringstream os;
    os.precision(12);
    os << "Kato quadrature at beta=" << beta << " stopped at " << q.panels << " panels: best value " << q.value
       << " with error bound " << q.errorEstimate << " > tolerance " << tol;
    throw QuadratureFailure(os.str(), q.value, q.errorEstimate);
  }
  cert.b = std::max(0.0, q.value);
  cert.quadratureError = q.errorEstimate;
  return cert;
}

std::vector<double> decay_profile(const SpectralData& heat, const ScalarField& v, const std::vector<double>& times) {
  requireHeatSemigroup(heat);
  requireNonnegative(v);
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    if (!(t >= 0.0)) throw InputError("profile times must be nonnegative");
    out.push_back(kato_integrand(heat, v, t));
  }
  return out;
}

std::vector<KatoCertificate> kato_scan(const SpectralData& heat, const ScalarField& rhoMinus, double alpha,
                                       const std::vector<double>& betaGrid, int n, const KatoOptions& options) {
  if (betaGrid.empty()) throw InputError("beta grid is empty");
  for (std::size_t i = 1; i < betaGrid.size(); ++i) {
    if (!(betaGrid[i] > betaGrid[i - 1])) throw InputError("beta grid must be strictly increasing");
  }
  const double threshold = kato_threshold(delta_of_alpha(alpha, n));
  std::vector<KatoCertificate> rows;
  rows.reserve(betaGrid.size());
  for (double beta : betaGrid) {
    KatoCertificate c = kato_constant(heat, rhoMinus, beta, options);
    c.threshold = threshold;
    c.admissible = c.b + c.quadratureError < threshold;
    rows.push_back(c);
  }
  return rows;
}

std::optional<KatoCertificate> find_admissible(const SpectralData& heat, const ScalarField& rhoMinus, double alpha,
                                               const std::vector<double>& betaGrid, int n,
                                               const KatoOptions& options) {
  std::optional<KatoCertificate> best;
  for (const auto& c : kato_scan(heat, rhoMinus, alpha, betaGrid, n, options)) {
    if (c.admissible) best = c;
  }
  return best;
}

} // namespace katolab
