#include "katolab/error.hpp"
#include "katolab/mesh_builders.hpp"
#include "katolab/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace katolab;

TEST_SUITE("spectral") {

TEST_CASE("sphere spectrum: 0 then the triple eigenvalue near 2") {
  const auto m = build_sphere(1.0, 3);
  const SpectralData s = eigendecompose(m, std::nullopt, 20);
  CHECK(std::abs(s.eigenvalues()[0]) < 1e-10);
  for (int k = 1; k <= 3; ++k) CHECK(s.eigenvalues()[k] == doctest::Approx(2.0).epsilon(0.01));
  CHECK(s.eigenvalues()[4] == doctest::Approx(6.0).epsilon(0.02));
  // First eigenvector is the normalized constant.
  const double c = 1.0 / std::sqrt(m.volume());
  CHECK((s.eigenvectors().col(0).array() - c).abs().maxCoeff() < 1e-8);
  CHECK_FALSE(s.isComplete());
}

TEST_CASE("eigenvectors are orthonormal for the lumped mass and deterministic in sign") {
  const auto m = build_torus_of_revolution(2.0, 1.0, 16);
  const SpectralData a = eigendecompose(m, std::nullopt, 30);
  const Eigen::MatrixXd gram = a.eigenvectors().transpose() * m.vertexAreas().asDiagonal() * a.eigenvectors();
  CHECK((gram - Eigen::MatrixXd::Identity(30, 30)).cwiseAbs().maxCoeff() < 1e-10);
  const SpectralData b = eigendecompose(m, std::nullopt, 30);
  CHECK((a.eigenvectors() - b.eigenvectors()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("shift-invert Lanczos agrees with the dense solver") {
  const auto m = build_torus_of_revolution(2.0, 1.0, 48); // 1152 vertices
  const SpectralData sparse = eigendecompose(m, std::nullopt, 40);  // iterative
  const SpectralData dense = eigendecompose(m, std::nullopt, 800); // 2K > N: dense
  for (int k = 0; k < 40; ++k) CHECK(sparse.eigenvalues()[k] == doctest::Approx(dense.eigenvalues()[k]).epsilon(1e-9));

  ScalarField w = -0.5 * rho_minus(m);
  const SpectralData shifted = eigendecompose(m, w, 10);
  const SpectralData shiftedDense = eigendecompose(m, w, 700);
  CHECK(shifted.eigenvalues()[0] < 0.0);
  for (int k = 0; k < 10; ++k)
    CHECK(shifted.eigenvalues()[k] == doctest::Approx(shiftedDense.eigenvalues()[k]).epsilon(1e-9));
}

TEST_CASE("semigroup: identity at zero, conservation and the semigroup law") {
  const auto m = build_torus_of_revolution(2.0, 1.0, 16);
  const SpectralData s = eigendecompose(m, std::nullopt, m.vertexCount());
  CHECK(s.isComplete());
  CHECK(s.kernelFloor() == 0.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  ScalarField f(m.vertexCount());
  for (auto& v : f) v = g(rng);

  CHECK((semigroup_apply(s, f, 0.0).values - f).cwiseAbs().maxCoeff() == 0.0);
  const ScalarField ones = ScalarField::Ones(m.vertexCount());
  CHECK((semigroup_apply(s, ones, 0.7).values - ones).cwiseAbs().maxCoeff() < 1e-10);
  // Total mass is conserved.
  CHECK(s.innerProduct(semigroup_apply(s, f, 0.3).values, ones) == doctest::Approx(s.innerProduct(f, ones)).epsilon(1e-9));

  const ScalarField ts = semigroup_apply(s, semigroup_apply(s, f, 0.1).values, 0.25).values;
  const ScalarField direct = semigroup_apply(s, f, 0.35).values;
  CHECK((ts - direct).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(semigroup_apply(s, f, -1.0), InputError);
}

TEST_CASE("time derivative matches central differences") {
  const auto m = build_sphere(1.0, 2);
  const SpectralData s = eigendecompose(m, std::nullopt, m.vertexCount());
  ScalarField f(m.vertexCount());
  for (int i = 0; i < m.vertexCount(); ++i) f[i] = 1.0 + m.vertices()[i].x() * m.vertices()[i].y();
  const double t = 0.2, h = 1e-5;
  const ScalarField fd = (semigroup_apply(s, f, t + h).values - semigroup_apply(s, f, t - h).values) / (2.0 * h);
  CHECK((time_derivative(s, f, t) - fd).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("kernel: symmetry, positivity, norms and the truncation floor") {
  const auto m = build_sphere(1.0, 2);
  const SpectralData s = eigendecompose(m, std::nullopt, m.vertexCount());
  const KernelMatrix k = kernel(s, 0.1);
  CHECK((k.entries - k.entries.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(k.positivityDefect() < 1e-12);
  CHECK((kernel_diagonal(s, 0.1) - k.entries.diagonal()).cwiseAbs().maxCoeff() < 1e-12);

  const OperatorNorms full = op_norms(k, s.weights());
  const OperatorNorms free = op_norms_matrix_free(s, 0.1);
  CHECK(full.normInfInf == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(full.norm11 == doctest::Approx(full.normInfInf).epsilon(1e-12));
  CHECK(free.normInfInf == doctest::Approx(full.normInfInf).epsilon(1e-12));
  CHECK(free.norm1Inf == doctest::Approx(full.norm1Inf).epsilon(1e-12));

  const SpectralData truncated = eigendecompose(m, std::nullopt, 40);
  const double floor = truncated.kernelFloor();
  CHECK(floor == doctest::Approx((std::log(1e8) + std::log(m.volume())) / truncated.eigenvalues()[39]).epsilon(1e-14));
  CHECK_THROWS_AS(kernel(truncated, 0.5 * floor), InputError);
  CHECK_NOTHROW(kernel(truncated, 2.0 * floor));
  CHECK_THROWS_AS(kernel(s, -0.1), InputError);
}

TEST_CASE("potentials shift the spectrum") {
  const auto m = build_sphere(1.0, 2);
  const SpectralData plain = eigendecompose(m, std::nullopt, 10);
  const SpectralData shifted = eigendecompose(m, ScalarField::Constant(m.vertexCount(), 0.75), 10);
  for (int k = 0; k < 10; ++k) CHECK(shifted.eigenvalues()[k] == doctest::Approx(plain.eigenvalues()[k] + 0.75).epsilon(1e-9));
  CHECK(shifted.potential().has_value());
  ScalarField bad = ScalarField::Zero(m.vertexCount());
  bad[0] = std::nan("");
  CHECK_THROWS_AS(eigendecompose(m, bad, 10), InputError);
  CHECK_THROWS_AS(eigendecompose(m, ScalarField::Zero(3), 10), InputError);
  CHECK_THROWS_AS(eigendecompose(m, std::nullopt, m.vertexCount() + 1), InputError);
}

TEST_CASE("analytic torus spectral data with a constant potential") {
  const AnalyticFlatTorus torus({1.0, 1.0}, 5);
  const SpectralData s = eigendecompose(torus, 0.1);
  CHECK(s.eigenvalues()[0] == doctest::Approx(0.1));
  const ScalarField ones = ScalarField::Ones(s.pointCount());
  CHECK((semigroup_apply(s, ones, 2.0).values.array() - std::exp(-0.2)).abs().maxCoeff() < 1e-14);
}

} // TEST_SUITE
