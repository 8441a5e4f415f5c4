#include "katolab/error.hpp"
#include "katolab/flat_torus.hpp"
#include "katolab/spectral.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace katolab;

namespace {

constexpr double kPi = std::numbers::pi;

// Brute-force distance over the 3^n nearest lattice translates.
double bruteDistance(const std::vector<double>& L, const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(L.size());
  double best = 1e300;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    int rest = code;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const int shift = rest % 3 - 1;
      rest /= 3;
      const double d = x[i] - y[i] - shift * L[i];
      s += d * d;
    }
    best = std::min(best, std::sqrt(s));
  }
  return best;
}

} // namespace

TEST_SUITE("flat_torus") {

TEST_CASE("theta series: spectral and Gaussian-image forms agree") {
  for (double L : {1.0, 2.5}) {
    for (double t : {1e-3, 0.01, 0.1, 1.0, 5.0}) {
      for (double x : {0.0, 0.1, 0.37, 0.5}) {
        const double a = theta_spectral(t, L, x * L);
        const double b = theta_images(t, L, x * L);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
      }
    }
  }
  // sum_k e^{-4 pi^2 k^2 t} at t = 0.1 is 1 + 2 e^{-0.4 pi^2} up to e^{-1.6 pi^2}.
  const double s = theta_spectral(0.1, 1.0);
  CHECK(s == doctest::Approx(1.0 + 2.0 * std::exp(-0.4 * kPi * kPi)).epsilon(1e-6));
}

TEST_CASE("eigenvalues enumerate 4 pi^2 |k/L|^2 with multiplicity") {
  const AnalyticFlatTorus torus({1.0, 2.0}, 3);
  std::vector<double> oracle;
  for (int a = -3; a <= 3; ++a) {
    for (int b = -3; b <= 3; ++b) oracle.push_back(4.0 * kPi * kPi * (a * a + b * b / 4.0));
  }
  std::sort(oracle.begin(), oracle.end());
  const auto ev = torus.eigenvalues();
  REQUIRE(ev.size() == oracle.size());
  for (std::size_t i = 0; i < ev.size(); ++i) CHECK(ev[i] == doctest::Approx(oracle[i]).epsilon(1e-13));
  CHECK(torus.volume() == 2.0);
}

TEST_CASE("distance and diameter against brute force") {
  const std::vector<double> L{1.0, 1.5, 0.7};
  const AnalyticFlatTorus torus(L, 1);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double maxSeen = 0.0;
  for (int k = 0; k < 2000; ++k) {
    std::vector<double> x(3), y(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = L[i] * u(rng);
      y[i] = L[i] * u(rng);
    }
    const double d = torus.distance(x, y);
    CHECK(d == doctest::Approx(bruteDistance(L, x, y)).epsilon(1e-14));
    maxSeen = std::max(maxSeen, d);
  }
  const double diag = 0.5 * std::sqrt(1.0 + 1.5 * 1.5 + 0.7 * 0.7);
  CHECK(torus.diameter() == doctest::Approx(diag).epsilon(1e-15));
  CHECK(maxSeen <= torus.diameter());
  CHECK(torus.distance(std::vector<double>{0.0, 0.0, 0.0}, std::vector<double>{0.5, 0.75, 0.35}) ==
        doctest::Approx(diag).epsilon(1e-15));
}

TEST_CASE("sampled modes are orthonormal for the grid weights") {
  const AnalyticFlatTorus torus({1.0, 2.0}, 3);
  const SpectralData s = eigendecompose(torus);
  const Eigen::MatrixXd gram = s.eigenvectors().transpose() * s.weights().asDiagonal() * s.eigenvectors();
  CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(s.volume() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("mode gradients match finite differences") {
  const AnalyticFlatTorus torus({1.0, 2.0}, 3);
  const std::vector<double> x{0.31, 1.17};
  const double h = 1e-6;
  for (const auto& mode : torus.modes()) {
    const Eigen::VectorXd g = torus.modeGradient(mode, x);
    for (int i = 0; i < 2; ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (torus.modeValue(mode, xp) - torus.modeValue(mode, xm)) / (2.0 * h);
      CHECK(g[i] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("Fourier solutions solve the heat equation") {
  const AnalyticFlatTorus torus({1.0, 1.0}, 4);
  const FourierSolution u(torus, {{torus.mode({0, 0}, FourierMode::Kind::Constant), 1.0},
                                  {torus.mode({1, 0}, FourierMode::Kind::Cos), 0.5},
                                  {torus.mode({1, 2}, FourierMode::Kind::Sin), 0.1}});
  CHECK(u.minimumBound() == doctest::Approx(0.4));
  const std::vector<double> x{0.2, 0.65};
  // u(x, 0) = 1 + 0.5 cos(2 pi x1) + 0.1 sin(2 pi (x1 + 2 x2)).
  CHECK(u.value(x, 0.0) ==
        doctest::Approx(1.0 + 0.5 * std::cos(2 * kPi * 0.2) + 0.1 * std::sin(2 * kPi * (0.2 + 1.3))).epsilon(1e-14));
  const double t = 0.03, h = 1e-6;
  const double fd = (u.value(x, t + h) - u.value(x, t - h)) / (2.0 * h);
  CHECK(u.timeDerivative(x, t) == doctest::Approx(fd).epsilon(1e-6));
  // d_t u = -Delta u with Delta >= 0: compare with a five-point Laplacian.
  const double e = 1e-4;
  double lap = -4.0 * u.value(x, t);
  for (int i = 0; i < 2; ++i) {
    auto xp = x, xm = x;
    xp[i] += e;
    xm[i] -= e;
    lap += u.value(xp, t) + u.value(xm, t);
  }
  lap /= e * e;
  CHECK(u.timeDerivative(x, t) == doctest::Approx(lap).epsilon(1e-4));
}

TEST_CASE("heat kernel: normalization, symmetry and the spectral sum") {
  const AnalyticFlatTorus torus({1.0, 1.0}, 15);
  const std::vector<double> x{0.1, 0.2}, y{0.7, 0.45};
  CHECK(torus.heatKernel(0.05, x, y) == doctest::Approx(torus.heatKernel(0.05, y, x)).epsilon(1e-15));
  CHECK(torus.heatKernelDiagonal(0.1) == doctest::Approx(std::pow(theta_spectral(0.1, 1.0), 2)).epsilon(1e-14));
  CHECK(torus.heatKernelDiagonal(10.0) == doctest::Approx(1.0).epsilon(1e-15));

  // Riemann sum of p_t(x, .) over the grid integrates to one.
  const auto pts = torus.gridPoints();
  double mass = 0.0;
  for (const auto& p : pts) mass += torus.heatKernel(0.05, x, {p.data(), 2});
  CHECK(mass / pts.size() == doctest::Approx(1.0).epsilon(1e-12));

  // Truncated spectral sum on the grid reproduces the kernel at moderate t.
  const SpectralData s = eigendecompose(torus);
  const KernelMatrix k = kernel(s, 0.05);
  CHECK(k.entries(0, 37) ==
        doctest::Approx(torus.heatKernel(0.05, {pts[0].data(), 2}, {pts[37].data(), 2})).epsilon(1e-10));
}

TEST_CASE("invalid tori") {
  CHECK_THROWS_AS(AnalyticFlatTorus({}, 2), InputError);
  CHECK_THROWS_AS(AnalyticFlatTorus({1.0, -1.0}, 2), InputError);
  CHECK_THROWS_AS(AnalyticFlatTorus({1.0, 1.0}, -1), InputError);
}

} // TEST_SUITE
