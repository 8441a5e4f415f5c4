#pragma once

#include <functional>

namespace katolab {

struct SimpsonOptions {
  /// Maximum number of panels before giving up.
  int panelBudget = 4096;
  /// Geometric panels [a + (b-a) 2^{-k-1}, a + (b-a) 2^{-k}] seeded at the left end.
  int geometricSeeds = 0;
};

struct QuadratureResult {
  double value = 0.0;
  /// Sum over panels of |S_fine - S_coarse| / 15.
  double errorEstimate = 0.0;
  int panels = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Globally adaptive Simpson rule: repeatedly bisects the panel with the
/// largest local error until the summed estimate drops to `tol` or the panel
/// budget is spent. Panel values are Richardson-corrected.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                                  const SimpsonOptions& options = {});

} // namespace katolab
