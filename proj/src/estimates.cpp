#include "katolab/estimates.hpp"

#include "katolab/error.hpp"

#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>

namespace katolab {

namespace {

using Real = long double;

Bound fromLog(Real logValue) {
  if (logValue > std::log(static_cast<Real>(DBL_MAX))) return {std::numeric_limits<double>::infinity(), true};
  return {static_cast<double>(std::exp(logValue)), false};
}

Real kappa(const EstimateParams& p) { return static_cast<Real>(p.delta) / (5.0L - p.delta); }

// log(1/(1-b)) without cancellation for small b.
Real logInverseComplement(double b) { return -std::log1p(-static_cast<Real>(b)); }

Real baseExponentL(const EstimateParams& p) {
  return static_cast<Real>(p.n) / ((2.0L - p.delta) * static_cast<Real>(p.alpha));
}

} // namespace

double delta_of_alpha(double alpha, int n) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in the open interval (0, 1)");
  if (n < 1) throw InputError("dimension must be positive");
  const Real c = 1.0L - alpha;
  return static_cast<double>(2.0L * c * c / (n + c * c));
}

double kato_threshold(double delta) {
  if (!(delta > 0.0 && delta < 5.0)) throw InputError("delta must lie in (0, 5)");
  return static_cast<double>(static_cast<Real>(delta) / (5.0L - delta));
}

EstimateParams EstimateParams::make(int n, double alpha, double beta, double b) {
  if (n < 2) throw InputError("dimension n must be at least 2");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError("beta must be positive");
  EstimateParams p;
  p.n = n;
  p.alpha = alpha;
  p.delta = delta_of_alpha(alpha, n);
  p.beta = beta;
  p.b = b;
  p.a = 5.0 / p.delta;
  const double thr = kato_threshold(p.delta);
  if (!(b >= 0.0) || !(b < thr)) {
    std::ostringstream os;
    os << "Kato constant b=" << b << " must satisfy 0 <= b < delta/(5-delta)=" << thr;
    throw InputError(os.str());
  }
  return p;
}

double EstimateParams::threshold() const { return kato_threshold(delta); }

double EstimateParams::baseExponent() const { return static_cast<double>(baseExponentL(*this)); }

double j_lower(double t, const EstimateParams& p) {
  if (!(t >= 0.0)) throw InputError("j(t) needs t >= 0");
  const Real exponent = (1.0L + static_cast<Real>(t) / p.beta) * kappa(p);
  return static_cast<double>(std::exp(-exponent * logInverseComplement(p.b)));
}

double liyau_rhs(double t, const EstimateParams& p) {
  if (!(t > 0.0)) throw InputError("gradient-estimate bound needs t > 0");
  const Real exponent = (1.0L + static_cast<Real>(t) / p.beta) * kappa(p);
  const Real logValue = std::log(baseExponentL(p)) - std::log(static_cast<Real>(t)) + exponent * logInverseComplement(p.b);
  return fromLog(logValue).value;
}

double harnack_lambda(double T, const EstimateParams& p) {
  if (!(T >= 0.0)) throw InputError("Harnack horizon T must be nonnegative");
  const Real exponent = (1.0L + static_cast<Real>(T) / p.beta) * kappa(p);
  return static_cast<double>(std::exp(exponent * logInverseComplement(p.b)));
}

Bound harnack_factor(double d, double t1, double t2, double T, const EstimateParams& p) {
  if (!(t1 > 0.0 && t1 < t2 && t2 <= T)) throw InputError("Harnack factor requires 0 < t1 < t2 <= T");
  if (!(d >= 0.0)) throw InputError("distance must be nonnegative");
  const Real lambda = std::exp((1.0L + static_cast<Real>(T) / p.beta) * kappa(p) * logInverseComplement(p.b));
  const Real dd = static_cast<Real>(d);
  const Real logValue = baseExponentL(p) * lambda * std::log(static_cast<Real>(t2) / t1) +
                        lambda * dd * dd / (4.0L * (static_cast<Real>(t2) - t1) * p.alpha);
  return fromLog(logValue);
}

Bound heat_kernel_constant(const EstimateParams& p, double diam) {
  if (!(diam >= 0.0)) throw InputError("diameter must be nonnegative");
  const Real root = std::exp(0.5L * logInverseComplement(p.b));
  const Real e = baseExponentL(p) * root;
  const Real dd = static_cast<Real>(diam);
  return fromLog(e * std::log(static_cast<Real>(p.beta)) + root * dd * dd / (static_cast<Real>(p.alpha) * p.beta));
}

HeatKernelBounds heat_kernel_bounds(double t, double d, const EstimateParams& p, double diam, double vol) {
  if (!(t > 0.0 && t < p.beta / 2.0)) throw InputError("heat-kernel bounds hold only for 0 < t < beta/2");
  if (!(d >= 0.0 && d <= diam)) throw InputError("distance must lie in [0, diam]");
  if (!(vol > 0.0)) throw InputError("volume must be positive");
  const Real root = std::exp(0.5L * logInverseComplement(p.b));
  const Real e = baseExponentL(p) * root;
  const Bound c1 = heat_kernel_constant(p, diam);
  const Real dd = static_cast<Real>(diam), dist = static_cast<Real>(d), tt = static_cast<Real>(t);
  const Real logC1 = e * std::log(static_cast<Real>(p.beta)) + root * dd * dd / (static_cast<Real>(p.alpha) * p.beta);
  const Real logOn = logC1 - std::log(static_cast<Real>(vol)) - e * std::log(tt);
  const Real logOff = logOn + dd * dd / tt - dist * dist / (4.0L * tt);
  const Bound on = fromLog(logOn), off = fromLog(logOff);
  HeatKernelBounds out;
  out.C1 = c1.value;
  out.exponent = static_cast<double>(e);
  out.onDiag = on.value;
  out.offDiag = off.value;
  out.overflow = c1.overflow || on.overflow || off.overflow;
  return out;
}

Bound schrodinger_norm_bound(double t, const EstimateParams& p) {
  if (!(t >= 0.0)) throw InputError("norm bound needs t >= 0");
  return fromLog((1.0L + static_cast<Real>(t) / p.beta) * logInverseComplement(p.b));
}

BettiBound betti_bound(const EstimateParams& p, double diam) {
  if (!(diam >= 0.0)) throw InputError("diameter must be nonnegative");
  const Real b = p.b;
  const Real root = std::exp(0.5L * logInverseComplement(p.b));
  const Real e = baseExponentL(p) * root;
  const Real dd = static_cast<Real>(diam), beta = static_cast<Real>(p.beta);
  const Real logC1 = e * std::log(beta) + root * dd * dd / (static_cast<Real>(p.alpha) * beta);
  const Real logB = logC1 + (1.5L * (1.0L + b) / (1.0L - b) + e) * std::log(2.0L / (1.0L - b)) +
                    e * std::log(2.0L / beta) + beta * dd * dd * (1.0L - b) / (2.0L * (1.0L + b));
  const Bound v = fromLog(logB);
  return {v.value, v.overflow, p.n >= 3};
}

} // namespace katolab
