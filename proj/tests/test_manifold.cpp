#include "katolab/error.hpp"
#include "katolab/mesh_builders.hpp"
#include "katolab/mesh_io.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

using namespace katolab;

namespace {

const std::filesystem::path kData = KATOLAB_TEST_DATA;

double gaussBonnetResidual(const DiscreteManifold& m) {
  return std::abs(m.angleDefects().sum() - 2.0 * std::numbers::pi * m.eulerCharacteristic());
}

} // namespace

TEST_SUITE("manifold") {

TEST_CASE("builders produce closed surfaces of the right topology") {
  const auto ft = build_flat_torus({1.0, 1.0}, 8);
  CHECK(ft.mesh.vertexCount() == 64);
  CHECK(ft.mesh.faceCount() == 128);
  CHECK(ft.mesh.eulerCharacteristic() == 0);
  CHECK(ft.mesh.volume() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ft.mesh.angleDefects().cwiseAbs().maxCoeff() < 1e-12);

  const auto sphere = build_sphere(1.0, 3);
  CHECK(sphere.vertexCount() == 642);
  CHECK(sphere.eulerCharacteristic() == 2);
  CHECK(sphere.volume() == doctest::Approx(4.0 * std::numbers::pi).epsilon(2e-2));

  const auto torus = build_torus_of_revolution(2.0, 1.0, 64);
  CHECK(torus.vertexCount() == 2048);
  CHECK(torus.eulerCharacteristic() == 0);
  CHECK(torus.volume() == doctest::Approx(4.0 * std::numbers::pi * std::numbers::pi * 2.0).epsilon(1e-2));

  CHECK_THROWS_AS(build_flat_torus({1.0, 1.0}, 3), InputError);
  CHECK_THROWS_AS(build_torus_of_revolution(1.0, 2.0, 32), InputError);
  CHECK_THROWS_AS(build_sphere(1.0, 0), InputError);
}

TEST_CASE("Gauss-Bonnet holds to machine precision") {
  for (int s = 1; s <= 4; ++s) CHECK(gaussBonnetResidual(build_sphere(1.0, s)) < 1e-10);
  for (int r : {16, 32, 64}) CHECK(gaussBonnetResidual(build_torus_of_revolution(2.0, 1.0, r)) < 1e-10);
  CHECK(gaussBonnetResidual(build_flat_torus({2.0, 3.0}, 10).mesh) < 1e-12);
}

TEST_CASE("stiffness is symmetric, annihilates constants and lumped areas sum to the area") {
  const auto m = build_torus_of_revolution(2.0, 1.0, 24);
  const Eigen::SparseMatrix<double>& L = m.stiffness();
  const Eigen::MatrixXd dense(L);
  CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((L * Eigen::VectorXd::Ones(m.vertexCount())).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(m.vertexAreas().sum() == doctest::Approx(m.faceAreas().sum()).epsilon(1e-14));
  CHECK(m.vertexAreas().minCoeff() > 0.0);

  const auto ft = build_flat_torus({1.0, 1.0}, 8);
  const ScalarField u = ScalarField::Random(64);
  CHECK(u.dot(ft.mesh.stiffness() * u) >= 0.0);
}

TEST_CASE("curvature converges on the torus of revolution") {
  double previous = 1e300;
  for (int r : {32, 64, 128}) {
    const auto m = build_torus_of_revolution(2.0, 1.0, r);
    const double err = (m.gaussianCurvature() - *m.referenceCurvature()).cwiseAbs().maxCoeff();
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 2e-3);
  const auto m = build_torus_of_revolution(2.0, 1.0, 32);
  const ScalarField rho = rho_minus(m);
  CHECK(rho.minCoeff() == 0.0);
  CHECK(rho.maxCoeff() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("metric scaling scales curvature by 1/s^2") {
  const auto m = build_torus_of_revolution(2.0, 1.0, 24);
  const auto big = m.scaled(3.0);
  CHECK(big.volume() == doctest::Approx(9.0 * m.volume()).epsilon(1e-13));
  CHECK((big.gaussianCurvature() * 9.0 - m.gaussianCurvature()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(big.meanEdgeLength() == doctest::Approx(3.0 * m.meanEdgeLength()).epsilon(1e-13));
  CHECK_THROWS_AS(m.scaled(0.0), InputError);
}

TEST_CASE("FEM gradient of constants and of the height function") {
  const auto ft = build_flat_torus({1.0, 1.0}, 8);
  CHECK(gradient_squared(ft.mesh, ScalarField::Constant(64, 3.0)).cwiseAbs().maxCoeff() < 1e-20);
  const auto sphere = build_sphere(1.0, 2);
  ScalarField z(sphere.vertexCount());
  for (int i = 0; i < sphere.vertexCount(); ++i) z[i] = sphere.vertices()[i].z();
  const ScalarField g2 = gradient_squared(sphere, z);
  // |grad z|^2 = 1 - z^2 on the unit sphere.
  double worst = 0.0;
  for (int i = 0; i < sphere.vertexCount(); ++i) worst = std::max(worst, std::abs(g2[i] - (1.0 - z[i] * z[i])));
  CHECK(worst < 0.1);
}

TEST_CASE("edge-graph distances bound the flat-torus distance from above") {
  const auto ft = build_flat_torus({1.0, 1.0}, 16);
  const ScalarField d = geodesic_distance(ft.mesh, 0);
  const auto& v = ft.mesh.vertices();
  for (int i = 0; i < ft.mesh.vertexCount(); ++i) {
    const double exact = ft.analytic.distance(std::vector<double>{v[0].x(), v[0].y()},
                                              std::vector<double>{v[i].x(), v[i].y()});
    CHECK(d[i] >= exact - 1e-12);
    CHECK(d[i] <= exact * std::sqrt(2.0) + 1e-12);
  }
  const double diam = diameter(ft.mesh);
  CHECK(diam >= ft.analytic.diameter() - 1e-12);
  CHECK(diam <= ft.analytic.diameter() * std::sqrt(2.0) + 1e-12);

  const auto samples = farthest_point_samples(ft.mesh, 5);
  CHECK(samples.size() == 5);
  CHECK(samples.front() == 0);
}

TEST_CASE("mesh IO round trip and loaders") {
  const auto ico = load_mesh(kData / "icosahedron.off");
  CHECK(ico.vertexCount() == 12);
  CHECK(ico.faceCount() == 20);
  CHECK(ico.eulerCharacteristic() == 2);
  // Each vertex of the icosahedron has defect 2 pi - 5 pi/3 = pi/3.
  CHECK(ico.angleDefects().cwiseAbs().minCoeff() == doctest::Approx(std::numbers::pi / 3.0).epsilon(1e-12));

  std::stringstream buffer;
  write_off(buffer, ico);
  const auto back = read_off(buffer, "roundtrip");
  CHECK(back.vertexCount() == 12);
  for (int i = 0; i < 12; ++i) CHECK((back.vertices()[i] - ico.vertices()[i]).norm() == 0.0);

  const auto tet = load_mesh(kData / "tetrahedron.obj");
  CHECK(tet.vertexCount() == 4);
  CHECK(tet.faceCount() == 4);
  CHECK(gaussBonnetResidual(tet) < 1e-12);

  CHECK(mesh_format_from_path("a/b/MESH.OFF") == MeshFormat::OFF);
  CHECK(mesh_format_from_path("x.obj") == MeshFormat::OBJ);
  CHECK_THROWS_AS(mesh_format_from_path("x.ply"), InputError);
  CHECK_THROWS_AS(load_mesh(kData / "missing.off"), InputError);
}

TEST_CASE("a hole is reported as a boundary cycle") {
  try {
    load_mesh(kData / "icosahedron_hole.off");
    FAIL("expected MeshError");
  } catch (const MeshError& e) {
    CHECK(e.kind() == MeshError::Kind::BoundaryEdge);
    REQUIRE(e.simplices().size() == 1);
    std::vector<int> cycle = e.simplices()[0];
    std::sort(cycle.begin(), cycle.end());
    CHECK(cycle == std::vector<int>{0, 5, 11});
  }
}

TEST_CASE("quad faces are rejected with the offending polygons") {
  try {
    load_mesh(kData / "cube_quads.obj");
    FAIL("expected MeshError");
  } catch (const MeshError& e) {
    CHECK(e.kind() == MeshError::Kind::NotTriangulated);
    CHECK(e.simplices().size() == 6);
    CHECK(e.simplices()[0].size() == 4);
  }
}

TEST_CASE("structural defects") {
  std::vector<Eigen::Vector3d> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  // Flipped face: inconsistent orientation.
  std::vector<Face> flipped{{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 2, 3}};
  try {
    DiscreteManifold(v, flipped, "flipped");
    FAIL("expected MeshError");
  } catch (const MeshError& e) {
    CHECK(e.kind() == MeshError::Kind::NonOrientable);
  }

  std::vector<Face> tet{{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  CHECK_NOTHROW(DiscreteManifold(v, tet, "tet"));

  auto extra = v;
  extra.emplace_back(5, 5, 5);
  try {
    DiscreteManifold(extra, tet, "isolated vertex");
    FAIL("expected MeshError");
  } catch (const MeshError& e) {
    CHECK(e.kind() == MeshError::Kind::Disconnected);
  }

  std::vector<Eigen::Vector3d> flat{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 0, 1}};
  std::vector<Face> degenerate{{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  try {
    DiscreteManifold(flat, degenerate, "degenerate");
    FAIL("expected MeshError");
  } catch (const MeshError& e) {
    CHECK(e.kind() == MeshError::Kind::DegenerateFace);
  }

  std::stringstream garbage("OFF\n3 1 0\n0 0 0\n1 0 0\n");
  CHECK_THROWS_AS(read_off(garbage, "short"), MeshError);
}

} // TEST_SUITE
