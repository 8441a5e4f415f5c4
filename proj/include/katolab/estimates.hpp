#pragma once

namespace katolab {

/// The constants feeding every closed-form bound: dimension n, alpha in (0,1),
/// the Kato time beta and the Kato constant b of rho_-. delta and a are derived.
struct EstimateParams {
  int n = 2;
  double alpha = 0.5;
  double delta = 0.0;
  double beta = 1.0;
  double b = 0.0;
  double a = 0.0;

  /// Validates n >= 2, alpha in (0,1), beta > 0 and 0 <= b < delta/(5-delta).
  static EstimateParams make(int n, double alpha, double beta, double b);

  double threshold() const;
  /// n / ((2 - delta) alpha), the Li-Yau exponent at b = 0.
  double baseExponent() const;
};

/// Result of a bound whose exponents stack. Values beyond double range are
/// reported as +inf with `overflow` set; the bound is then valid but useless.
struct Bound {
  double value = 0.0;
  bool overflow = false;
};

/// delta = 2 (1-alpha)^2 / (n + (1-alpha)^2).
double delta_of_alpha(double alpha, int n);

/// delta / (5 - delta), the admissibility threshold for the Kato constant.
double kato_threshold(double delta);

/// j(t) = (1-b)^{(1 + t/beta) delta/(5-delta)}.
double j_lower(double t, const EstimateParams& p);

/// Right-hand side of the gradient estimate: n / ((2-delta) alpha j(t) t).
double liyau_rhs(double t, const EstimateParams& p);

/// Lambda(T) = (1/(1-b))^{(1 + T/beta) delta/(5-delta)}, the bound on max 1/j over [0, T].
double harnack_lambda(double T, const EstimateParams& p);

/// Multiplier M with u(x,t1) <= u(y,t2) M for points at distance d:
/// (t2/t1)^{n Lambda / ((2-delta) alpha)} exp(Lambda d^2 / (4 (t2-t1) alpha)). Requires 0 < t1 < t2 <= T.
Bound harnack_factor(double d, double t1, double t2, double T, const EstimateParams& p);

struct HeatKernelBounds {
  double onDiag = 0.0;
  double offDiag = 0.0;
  double C1 = 0.0;
  /// n / ((2-delta) alpha) (1-b)^{-1/2}.
  double exponent = 0.0;
  bool overflow = false;
};

/// Uniform constant C1 = beta^E exp((1/(1-b))^{1/2} diam^2 / (alpha beta)).
/// The t-dependent factor 1/(2(beta - t)) of the derivation is replaced by its
/// worst case over t <= beta/2, which is 1/beta.
Bound heat_kernel_constant(const EstimateParams& p, double diam);

/// On-diagonal C1/Vol t^{-E} and off-diagonal onDiag exp(diam^2/t - d^2/(4t)), for 0 < t < beta/2.
HeatKernelBounds heat_kernel_bounds(double t, double d, const EstimateParams& p, double diam, double vol);

/// (1/(1-b))^{1 + t/beta}: bound on the L1 (and L-infinity) operator norm of
/// the semigroup perturbed by -2(a-1) rho_-.
Bound schrodinger_norm_bound(double t, const EstimateParams& p);

struct BettiBound {
  double value = 0.0;
  bool overflow = false;
  /// The bound is proven for n >= 3 only.
  bool dimensionHypothesis = false;
};

/// B = C1 (2/(1-b))^{(3/2)(1+b)/(1-b) + E} (2/beta)^E exp(beta diam^2 (1-b) / (2(1+b))).
BettiBound betti_bound(const EstimateParams& p, double diam);

} // namespace katolab
