#pragma once

#include "katolab/error.hpp"
#include "katolab/manifold.hpp"
#include "katolab/spectral.hpp"

#include <optional>
#include <vector>

namespace katolab {

/// b = int_0^beta |P_t V|_inf dt, with the quadrature error that certifies it.
/// `threshold` and `admissible` are filled in by find_admissible / kato_scan.
struct KatoCertificate {
  double beta = 0.0;
  double b = 0.0;
  double quadratureError = 0.0;
  std::optional<double> threshold;
  bool admissible = false;
};

/// Quadrature did not reach its tolerance within the panel budget.
class QuadratureFailure : public NumericalError {
public:
  QuadratureFailure(const std::string& what, double bestValue, double errorBound)
      : NumericalError(what), bestValue_(bestValue), errorBound_(errorBound) {}
  double bestValue() const { return bestValue_; }
  double errorBound() const { return errorBound_; }

private:
  double bestValue_;
  double errorBound_;
};

struct KatoOptions {
  /// Target error relative to the dominating value beta |V|_inf.
  double relativeTolerance = 1e-10;
  int panelBudget = 4096;
  int geometricSeeds = 24;
};

/// |P_t V|_inf at t; at t = 0 it is |V|_inf itself (no spectral truncation).
double kato_integrand(const SpectralData& heat, const ScalarField& v, double t);

/// Adaptive-Simpson value of the Kato constant. `heat` must carry no potential.
KatoCertificate kato_constant(const SpectralData& heat, const ScalarField& v, double beta,
                              const KatoOptions& options = {});

/// |P_t V|_inf at each requested time, reported raw.
std::vector<double> decay_profile(const SpectralData& heat, const ScalarField& v, const std::vector<double>& times);

/// Certificates for every grid beta with the threshold delta(alpha, n)/(5 - delta) attached.
std::vector<KatoCertificate> kato_scan(const SpectralData& heat, const ScalarField& rhoMinus, double alpha,
                                       const std::vector<double>& betaGrid, int n = 2,
                                       const KatoOptions& options = {});

/// Largest grid beta with b + quadratureError < threshold, or nothing.
std::optional<KatoCertificate> find_admissible(const SpectralData& heat, const ScalarField& rhoMinus, double alpha,
                                               const std::vector<double>& betaGrid, int n = 2,
                                               const KatoOptions& options = {});

} // namespace katolab
