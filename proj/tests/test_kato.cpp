#include "katolab/error.hpp"
#include "katolab/kato.hpp"
#include "katolab/mesh_builders.hpp"
#include "katolab/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace katolab;

namespace {

// Composite trapezoid with n panels; the oracle for the adaptive rule.
double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

} // namespace

TEST_SUITE("kato") {

TEST_CASE("adaptive Simpson on closed-form integrals") {
  auto q = adaptive_simpson([](double x) { return x * x * x * x; }, 0.0, 1.0, 1e-13);
  CHECK(q.converged);
  CHECK(q.value == doctest::Approx(0.2).epsilon(1e-13));

  q = adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12);
  CHECK(q.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(q.errorEstimate <= 1e-12);

  SimpsonOptions geometric;
  geometric.geometricSeeds = 20;
  q = adaptive_simpson([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10, geometric);
  CHECK(q.converged);
  CHECK(q.value == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

  SimpsonOptions tiny;
  tiny.panelBudget = 4;
  q = adaptive_simpson([](double x) { return std::sin(40.0 * x); }, 0.0, 3.0, 1e-14, tiny);
  CHECK_FALSE(q.converged);
  CHECK(q.panels <= 4);
}

TEST_CASE("planted constant potential gives beta * V exactly") {
  const AnalyticFlatTorus torus({1.0, 1.0}, 6);
  const SpectralData s = eigendecompose(torus);
  const ScalarField v = ScalarField::Constant(s.pointCount(), 0.1);
  const KatoCertificate c = kato_constant(s, v, 2.0);
  CHECK(std::abs(c.b - 0.2) < 1e-10);
  CHECK(c.quadratureError < 1e-10);
}

TEST_CASE("Kato constant against a fine trapezoid and under scaling") {
  const auto m = build_torus_of_revolution(2.0, 1.0, 16);
  const SpectralData s = eigendecompose(m, std::nullopt, m.vertexCount());
  const ScalarField rho = rho_minus(m);
  const double beta = 0.04;
  const KatoCertificate c = kato_constant(s, rho, beta);
  const double oracle = trapezoid([&](double t) { return kato_integrand(s, rho, t); }, 0.0, beta, 2048);
  CHECK(c.b == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(c.b <= beta * rho.maxCoeff() + 1e-15);

  const KatoCertificate tripled = kato_constant(s, 3.0 * rho, beta);
  CHECK(tripled.b == doctest::Approx(3.0 * c.b).epsilon(1e-12));

  CHECK(kato_integrand(s, rho, 0.0) == rho.maxCoeff());
  const auto profile = decay_profile(s, rho, {0.0, 0.01, 0.1, 1.0, 10.0, 400.0});
  for (std::size_t i = 1; i < profile.size(); ++i) CHECK(profile[i] <= profile[i - 1] + 1e-14);
  // Long-time limit is the mean of rho_-.
  CHECK(profile.back() == doctest::Approx(rho.dot(m.vertexAreas()) / m.volume()).epsilon(1e-8));
}

TEST_CASE("scan, admissibility and the largest admissible beta") {
  const auto m = build_torus_of_revolution(2.0, 1.0, 16);
  const SpectralData s = eigendecompose(m, std::nullopt, m.vertexCount());
  const ScalarField rho = rho_minus(m);
  const std::vector<double> grid{0.005, 0.01, 0.02, 0.04, 0.08, 0.16};
  const auto scan = kato_scan(s, rho, 0.5, grid);
  REQUIRE(scan.size() == grid.size());
  for (std::size_t i = 1; i < scan.size(); ++i) CHECK(scan[i].b > scan[i - 1].b);
  for (const auto& c : scan) {
    REQUIRE(c.threshold.has_value());
    CHECK(*c.threshold == doctest::Approx(2.0 / 43.0).epsilon(1e-15));
    CHECK(c.admissible == (c.b + c.quadratureError < 2.0 / 43.0));
  }
  CHECK(scan.front().admissible);
  CHECK_FALSE(scan.back().admissible);

  const auto best = find_admissible(s, rho, 0.5, grid);
  REQUIRE(best.has_value());
  for (const auto& c : scan) {
    if (c.admissible) CHECK(c.beta <= best->beta);
  }
  CHECK_FALSE(find_admissible(s, rho, 0.5, {1.0, 2.0}).has_value());
  CHECK_THROWS_AS(kato_scan(s, rho, 0.5, {0.1, 0.05}), InputError);
}

TEST_CASE("Kato constant of rho_- settles under refinement") {
  std::vector<double> values;
  for (int r : {16, 32, 64}) {
    const auto m = build_torus_of_revolution(2.0, 1.0, r);
    const SpectralData s = eigendecompose(m, std::nullopt, std::min(m.vertexCount(), 300));
    values.push_back(kato_constant(s, rho_minus(m), 0.5).b);
  }
  CHECK(std::abs(values[2] - values[1]) < std::abs(values[1] - values[0]));
}

TEST_CASE("input validation and quadrature failure") {
  const auto m = build_sphere(1.0, 1);
  const SpectralData s = eigendecompose(m, std::nullopt, m.vertexCount());
  ScalarField v = ScalarField::Ones(m.vertexCount());
  v[0] = -1.0;
  CHECK_THROWS_AS(kato_constant(s, v, 1.0), InputError);
  CHECK_THROWS_AS(kato_constant(s, ScalarField::Ones(m.vertexCount()), 0.0), InputError);
  const SpectralData withW = eigendecompose(m, ScalarField::Ones(m.vertexCount()), m.vertexCount());
  CHECK_THROWS_AS(kato_constant(withW, ScalarField::Ones(m.vertexCount()), 1.0), InputError);

  ScalarField spike = ScalarField::Zero(m.vertexCount());
  spike[3] = 1.0;
  KatoOptions starved;
  starved.panelBudget = 2;
  starved.geometricSeeds = 0;
  starved.relativeTolerance = 1e-14;
  try {
    kato_constant(s, spike, 1.0, starved);
    FAIL("expected QuadratureFailure");
  } catch (const QuadratureFailure& e) {
    CHECK(e.errorBound() > 0.0);
    CHECK(e.bestValue() > 0.0);
  }
}

} // TEST_SUITE
