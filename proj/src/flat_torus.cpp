#include "katolab/flat_torus.hpp"

#include "katolab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace katolab {

namespace {

constexpr double twoPi = 2.0 * std::numbers::pi;

double phase(const std::vector<int>& k, const std::vector<double>& periods, std::span<const double> x) {
  double p = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) p += twoPi * k[i] * x[i] / periods[i];
  return p;
}

double eigenvalueOf(const std::vector<int>& k, const std::vector<double>& periods) {
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double f = k[i] / periods[i];
    s += f * f;
  }
  return twoPi * twoPi * s;
}

// First nonzero entry positive: picks one representative of each +-k pair.
bool isPositiveHalf(const std::vector<int>& k) {
  for (int v : k) {
    if (v != 0) return v > 0;
  }
  return false;
}

double unnormalizedValue(const FourierMode& m, const std::vector<double>& periods, std::span<const double> x) {
  switch (m.kind) {
  case FourierMode::Kind::Constant: return 1.0;
  case FourierMode::Kind::Cos: return std::cos(phase(m.k, periods, x));
  case FourierMode::Kind::Sin: return std::sin(phase(m.k, periods, x));
  }
  return 0.0;
}

Eigen::VectorXd unnormalizedGradient(const FourierMode& m, const std::vector<double>& periods,
                                     std::span<const double> x) {
  const int n = static_cast<int>(periods.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  if (m.kind == FourierMode::Kind::Constant) return g;
  const double p = phase(m.k, periods, x);
  const double d = m.kind == FourierMode::Kind::Cos ? -std::sin(p) : std::cos(p);
  for (int i = 0; i < n; ++i) g[i] = d * twoPi * m.k[i] / periods[i];
  return g;
}

} // namespace

AnalyticFlatTorus::AnalyticFlatTorus(std::vector<double> periods, int modeCutoff)
    : periods_(std::move(periods)), modeCutoff_(modeCutoff) {
  if (periods_.empty()) throw InputError("flat torus needs at least one period");
  for (double L : periods_) {
    if (!(L > 0.0) || !std::isfinite(L)) throw InputError("flat torus periods must be positive");
  }
  if (modeCutoff_ < 0) throw InputError("mode cutoff must be nonnegative");

  const int n = dimension();
  const int side = 2 * modeCutoff_ + 1;
  long total = 1;
  for (int i = 0; i < n; ++i) total *= side;
  modes_.push_back(mode(std::vector<int>(n, 0), FourierMode::Kind::Constant));
  std::vector<int> k(n);
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    for (int i = n - 1; i >= 0; --i) {
      k[i] = static_cast<int>(rest % side) - modeCutoff_;
      rest /= side;
    }
    if (!isPositiveHalf(k)) continue;
    modes_.push_back(mode(k, FourierMode::Kind::Cos));
    modes_.push_back(mode(k, FourierMode::Kind::Sin));
  }
  std::stable_sort(modes_.begin(), modes_.end(),
                   [](const FourierMode& a, const FourierMode& b) { return a.eigenvalue < b.eigenvalue; });
}

double AnalyticFlatTorus::volume() const {
  double v = 1.0;
  for (double L : periods_) v *= L;
  return v;
}

double AnalyticFlatTorus::diameter() const {
  double s = 0.0;
  for (double L : periods_) s += 0.25 * L * L;
  return std::sqrt(s);
}

double AnalyticFlatTorus::distance(std::span<const double> x, std::span<const double> y) const {
  double s = 0.0;
  for (std::size_t i = 0; i < periods_.size(); ++i) {
    const double L = periods_[i];
    double d = std::fmod(std::abs(x[i] - y[i]), L);
    d = std::min(d, L - d);
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<double> AnalyticFlatTorus::eigenvalues() const {
  std::vector<double> out;
  out.reserve(modes_.size());
  for (const auto& m : modes_) out.push_back(m.eigenvalue);
  return out;
}

FourierMode AnalyticFlatTorus::mode(std::vector<int> k, FourierMode::Kind kind) const {
  if (static_cast<int>(k.size()) != dimension()) throw InputError("wave vector has wrong dimension");
  const bool zero = std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
  if (zero && kind != FourierMode::Kind::Constant) throw InputError("zero wave vector must be the constant mode");
  if (!zero && kind == FourierMode::Kind::Constant) throw InputError("constant mode needs the zero wave vector");
  FourierMode m{std::move(k), kind, 0.0};
  m.eigenvalue = eigenvalueOf(m.k, periods_);
  return m;
}

double AnalyticFlatTorus::modeValue(const FourierMode& m, std::span<const double> x) const {
  const double norm = m.kind == FourierMode::Kind::Constant ? std::sqrt(1.0 / volume()) : std::sqrt(2.0 / volume());
  return norm * unnormalizedValue(m, periods_, x);
}

Eigen::VectorXd AnalyticFlatTorus::modeGradient(const FourierMode& m, std::span<const double> x) const {
  const double norm = m.kind == FourierMode::Kind::Constant ? std::sqrt(1.0 / volume()) : std::sqrt(2.0 / volume());
  return norm * unnormalizedGradient(m, periods_, x);
}

std::vector<Eigen::VectorXd> AnalyticFlatTorus::gridPoints() const {
  const int n = dimension();
  const int res = gridResolution();
  long total = 1;
  for (int i = 0; i < n; ++i) total *= res;
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(total);
  for (long idx = 0; idx < total; ++idx) {
    Eigen::VectorXd p(n);
    long rest = idx;
    for (int i = n - 1; i >= 0; --i) {
      p[i] = periods_[i] * static_cast<double>(rest % res) / res;
      rest /= res;
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

double AnalyticFlatTorus::heatKernel(double t, std::span<const double> x, std::span<const double> y) const {
  double p = 1.0;
  for (std::size_t i = 0; i < periods_.size(); ++i) p *= theta_spectral(t, periods_[i], x[i] - y[i]);
  return p;
}

double AnalyticFlatTorus::heatKernelDiagonal(double t) const {
  double p = 1.0;
  for (double L : periods_) p *= theta_spectral(t, L, 0.0);
  return p;
}

double theta_spectral(double t, double period, double x) {
  if (!(t > 0.0)) throw InputError("theta series needs t > 0");
  const double rate = twoPi * twoPi * t / (period * period);
  double sum = 1.0;
  for (int k = 1;; ++k) {
    const double term = std::exp(-rate * k * k);
    sum += 2.0 * term * std::cos(twoPi * k * x / period);
    if (term < 1e-18 * sum && k > 1) break;
  }
  return sum / period;
}

double theta_images(double t, double period, double x) {
  if (!(t > 0.0)) throw InputError("theta series needs t > 0");
  const double x0 = x - period * std::round(x / period);
  const double pref = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
  double sum = std::exp(-x0 * x0 / (4.0 * t));
  for (int m = 1;; ++m) {
    const double a = x0 - m * period, b = x0 + m * period;
    const double term = std::exp(-a * a / (4.0 * t)) + std::exp(-b * b / (4.0 * t));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return pref * sum;
}

FourierSolution::FourierSolution(const AnalyticFlatTorus& torus, std::vector<std::pair<FourierMode, double>> terms)
    : periods_(torus.periods()), terms_(std::move(terms)) {
  for (const auto& [m, a] : terms_) {
    if (static_cast<int>(m.k.size()) != torus.dimension()) throw InputError("mode dimension mismatch");
    if (!std::isfinite(a)) throw InputError("non-finite Fourier amplitude");
  }
}

double FourierSolution::value(std::span<const double> x, double t) const {
  double u = 0.0;
  for (const auto& [m, a] : terms_) u += a * std::exp(-m.eigenvalue * t) * unnormalizedValue(m, periods_, x);
  return u;
}

Eigen::VectorXd FourierSolution::gradient(std::span<const double> x, double t) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(periods_.size()));
  for (const auto& [m, a] : terms_) g += a * std::exp(-m.eigenvalue * t) * unnormalizedGradient(m, periods_, x);
  return g;
}

double FourierSolution::timeDerivative(std::span<const double> x, double t) const {
  double d = 0.0;
  for (const auto& [m, a] : terms_)
    d -= m.eigenvalue * a * std::exp(-m.eigenvalue * t) * unnormalizedValue(m, periods_, x);
  return d;
}

double FourierSolution::minimumBound() const {
  double c = 0.0, rest = 0.0;
  for (const auto& [m, a] : terms_) {
    if (m.kind == FourierMode::Kind::Constant) c += a;
    else rest += std::abs(a);
  }
  return c - rest;
}

} // namespace katolab
