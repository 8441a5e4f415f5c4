#include "katolab/quadrature.hpp"

#include "katolab/error.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace katolab {

namespace {

// Samples at a, a+h/4, a+h/2, a+3h/4, b.
struct Panel {
  double a, b;
  std::array<double, 5> f;
  double coarse, fine, error;
};

Panel makePanel(double a, double b, const std::array<double, 5>& f) {
  const double h = b - a;
  Panel p{a, b, f, 0.0, 0.0, 0.0};
  p.coarse = h / 6.0 * (f[0] + 4.0 * f[2] + f[4]);
  p.fine = h / 12.0 * (f[0] + 4.0 * f[1] + 2.0 * f[2] + 4.0 * f[3] + f[4]);
  p.error = std::abs(p.fine - p.coarse) / 15.0;
  return p;
}

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

} // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                                  const SimpsonOptions& options) {
  if (!(b >= a)) throw InputError("quadrature interval is reversed");
  if (!(tol > 0.0)) throw InputError("quadrature tolerance must be positive");
  QuadratureResult out;
  if (b == a) {
    out.converged = true;
    return out;
  }

  auto eval = [&](double x) {
    ++out.evaluations;
    const double v = f(x);
    if (!std::isfinite(v)) throw NumericalError("integrand is not finite at t=" + std::to_string(x));
    return v;
  };
  auto build = [&](double lo, double hi, double flo, double fmid, double fhi) {
    const double h = hi - lo;
    return makePanel(lo, hi, {flo, eval(lo + 0.25 * h), fmid, eval(lo + 0.75 * h), fhi});
  };

  std::vector<double> breaks{a};
  for (int k = options.geometricSeeds; k >= 1; --k) breaks.push_back(a + (b - a) * std::ldexp(1.0, -k));
  breaks.push_back(b);

  std::priority_queue<Panel, std::vector<Panel>, ByError> queue;
  std::vector<double> fb(breaks.size());
  for (std::size_t i = 0; i < breaks.size(); ++i) fb[i] = eval(breaks[i]);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i], hi = breaks[i + 1];
    queue.push(build(lo, hi, fb[i], eval(0.5 * (lo + hi)), fb[i + 1]));
  }

  auto totalError = [&] {
    double e = 0.0;
    auto copy = queue;
    while (!copy.empty()) {
      e += copy.top().error;
      copy.pop();
    }
    return e;
  };

  double err = totalError();
  while (err > tol && static_cast<int>(queue.size()) < options.panelBudget) {
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = build(worst.a, mid, worst.f[0], worst.f[1], worst.f[2]);
    const Panel right = build(mid, worst.b, worst.f[2], worst.f[3], worst.f[4]);
    err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    // Guard against drift in the running sum.
    if (err <= tol) err = totalError();
  }

  out.panels = static_cast<int>(queue.size());
  while (!queue.empty()) {
    const Panel& p = queue.top();
    out.value += p.fine + (p.fine - p.coarse) / 15.0;
    out.errorEstimate += p.error;
    queue.pop();
  }
  out.converged = out.errorEstimate <= tol;
  return out;
}

} // namespace katolab
