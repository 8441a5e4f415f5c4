#include "katolab/mesh_builders.hpp"

#include "katolab/error.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace katolab {

FlatTorus build_flat_torus(std::array<double, 2> periods, int resolution) {
  if (!(periods[0] > 0.0) || !(periods[1] > 0.0)) throw InputError("flat torus periods must be positive");
  if (resolution < 4) throw InputError("flat torus resolution must be at least 4");
  const int res = resolution;
  const double hx = periods[0] / res, hy = periods[1] / res;
  auto id = [res](int i, int j) { return ((i + res) % res) * res + (j + res) % res; };

  std::vector<Eigen::Vector3d> verts;
  verts.reserve(res * res);
  for (int i = 0; i < res; ++i) {
    for (int j = 0; j < res; ++j) verts.emplace_back(i * hx, j * hy, 0.0);
  }
  std::vector<Face> faces;
  std::vector<FaceCorners> corners;
  faces.reserve(2 * res * res);
  corners.reserve(2 * res * res);
  for (int i = 0; i < res; ++i) {
    for (int j = 0; j < res; ++j) {
      const Eigen::Vector3d p00(i * hx, j * hy, 0.0), p10((i + 1) * hx, j * hy, 0.0),
          p11((i + 1) * hx, (j + 1) * hy, 0.0), p01(i * hx, (j + 1) * hy, 0.0);
      faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      corners.push_back({p00, p10, p11});
      faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      corners.push_back({p00, p11, p01});
    }
  }
  std::ostringstream name;
  name << "flat-torus:" << periods[0] << "x" << periods[1] << ",res=" << res;
  DiscreteManifold mesh(std::move(verts), std::move(faces), std::move(corners), name.str());
  mesh = std::move(mesh).withReferenceCurvature(ScalarField::Zero(mesh.vertexCount()));
  return {std::move(mesh), AnalyticFlatTorus({periods[0], periods[1]}, res / 2 - 1)};
}

DiscreteManifold build_sphere(double radius, int subdivisions) {
  if (!(radius > 0.0)) throw InputError("sphere radius must be positive");
  if (subdivisions < 1) throw InputError("sphere needs at least one subdivision");
  if (subdivisions > 8) throw InputError("sphere subdivisions above 8 exceed desk-scale limits");

  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> verts = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
      {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<Face> faces = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                             {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = a < b ? std::pair{a, b} : std::pair{b, a};
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      verts.push_back((verts[a] + verts[b]).normalized());
      const int id = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Face> refined;
    refined.reserve(4 * faces.size());
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      refined.push_back({f[0], ab, ca});
      refined.push_back({f[1], bc, ab});
      refined.push_back({f[2], ca, bc});
      refined.push_back({ab, bc, ca});
    }
    faces = std::move(refined);
  }
  for (auto& v : verts) v *= radius;
  std::ostringstream name;
  name << "sphere:r=" << radius << ",subdiv=" << subdivisions;
  const auto nv = static_cast<Eigen::Index>(verts.size());
  return DiscreteManifold(std::move(verts), std::move(faces), name.str())
      .withReferenceCurvature(ScalarField::Constant(nv, 1.0 / (radius * radius)));
}

DiscreteManifold build_torus_of_revolution(double R, double r, int resolution) {
  if (!(r > 0.0)) throw InputError("tube radius must be positive");
  if (!(R > r)) throw InputError("torus of revolution needs R > r (otherwise it self-intersects)");
  if (resolution < 8) throw InputError("torus resolution must be at least 8");
  const int nu = resolution;
  const int nv = std::max(6, static_cast<int>(std::lround(resolution * r / R)));
  const double twoPi = 2.0 * std::numbers::pi;
  auto id = [nu, nv](int i, int j) { return ((i + nu) % nu) * nv + (j + nv) % nv; };

  std::vector<Eigen::Vector3d> verts;
  ScalarField curvature(nu * nv);
  verts.reserve(nu * nv);
  for (int i = 0; i < nu; ++i) {
    const double u = twoPi * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double v = twoPi * j / nv;
      const double ring = R + r * std::cos(v);
      verts.emplace_back(ring * std::cos(u), ring * std::sin(u), r * std::sin(v));
      curvature[id(i, j)] = std::cos(v) / (r * ring);
    }
  }
  std::vector<Face> faces;
  faces.reserve(2 * nu * nv);
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  std::ostringstream name;
  name << "torus-rev:R=" << R << ",r=" << r << ",res=" << resolution;
  return DiscreteManifold(std::move(verts), std::move(faces), name.str()).withReferenceCurvature(std::move(curvature));
}

} // namespace katolab
