#include "katolab/manifold.hpp"

#include "katolab/error.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace katolab {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey undirected(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

// Chains boundary half-edges into closed vertex loops. Each boundary edge is
// stored in its face orientation, so following `next` walks a hole.
std::vector<std::vector<int>> boundaryCycles(const std::vector<EdgeKey>& directed) {
  std::multimap<int, int> next;
  for (const auto& [a, b] : directed) next.emplace(a, b);
  std::vector<std::vector<int>> cycles;
  while (!next.empty()) {
    auto it = next.begin();
    const int start = it->first;
    std::vector<int> cycle{start};
    int cur = it->second;
    next.erase(it);
    while (cur != start) {
      cycle.push_back(cur);
      auto step = next.find(cur);
      if (step == next.end()) break; // open chain on a non-manifold boundary
      cur = step->second;
      next.erase(step);
    }
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

std::string listSimplices(const std::vector<std::vector<int>>& simplices, std::size_t limit = 8) {
  std::ostringstream os;
  for (std::size_t i = 0; i < simplices.size() && i < limit; ++i) {
    os << (i ? " " : "") << '(';
    for (std::size_t k = 0; k < simplices[i].size(); ++k) os << (k ? "," : "") << simplices[i][k];
    os << ')';
  }
  if (simplices.size() > limit) os << " ...";
  return os.str();
}

} // namespace

DiscreteManifold::DiscreteManifold(std::vector<Eigen::Vector3d> vertices, std::vector<Face> faces,
                                   std::string descriptor)
    : vertices_(std::move(vertices)), faces_(std::move(faces)), descriptor_(std::move(descriptor)) {
  corners_.reserve(faces_.size());
  for (const auto& f : faces_) {
    for (int v : f) {
      if (v < 0 || v >= vertexCount())
        throw MeshError(MeshError::Kind::Parse, "face references vertex " + std::to_string(v) + " out of range");
    }
    corners_.push_back({vertices_[f[0]], vertices_[f[1]], vertices_[f[2]]});
  }
  assemble();
}

DiscreteManifold::DiscreteManifold(std::vector<Eigen::Vector3d> vertices, std::vector<Face> faces,
                                   std::vector<FaceCorners> corners, std::string descriptor)
    : vertices_(std::move(vertices)), faces_(std::move(faces)), corners_(std::move(corners)),
      descriptor_(std::move(descriptor)) {
  if (corners_.size() != faces_.size()) throw InputError("face geometry count does not match face count");
  for (const auto& f : faces_) {
    for (int v : f) {
      if (v < 0 || v >= vertexCount())
        throw MeshError(MeshError::Kind::Parse, "face references vertex " + std::to_string(v) + " out of range");
    }
  }
  assemble();
}

void DiscreteManifold::assemble() {
  const int nv = vertexCount();
  const int nf = faceCount();
  if (nf == 0) throw MeshError(MeshError::Kind::Parse, "mesh has no faces");

  // Topology: every undirected edge must appear once in each direction.
  std::map<EdgeKey, std::vector<EdgeKey>> edgeUses;
  for (const auto& f : faces_) {
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
      throw MeshError(MeshError::Kind::DegenerateFace, "face repeats a vertex", {{f[0], f[1], f[2]}});
    for (int k = 0; k < 3; ++k) {
      const int a = f[k], b = f[(k + 1) % 3];
      edgeUses[undirected(a, b)].push_back({a, b});
    }
  }
  std::vector<EdgeKey> boundary;
  std::vector<std::vector<int>> nonManifold, flipped;
  for (const auto& [key, uses] : edgeUses) {
    if (uses.size() == 1) boundary.push_back(uses.front());
    else if (uses.size() > 2) nonManifold.push_back({key.first, key.second});
    else if (uses[0] == uses[1]) flipped.push_back({key.first, key.second});
  }
  if (!boundary.empty()) {
    auto cycles = boundaryCycles(boundary);
    throw MeshError(MeshError::Kind::BoundaryEdge,
                    "mesh is not closed: " + std::to_string(boundary.size()) + " boundary edges in " +
                        std::to_string(cycles.size()) + " hole(s): " + listSimplices(cycles),
                    std::move(cycles));
  }
  if (!nonManifold.empty())
    throw MeshError(MeshError::Kind::NonManifoldEdge,
                    "edges shared by more than two faces: " + listSimplices(nonManifold), std::move(nonManifold));
  if (!flipped.empty())
    throw MeshError(MeshError::Kind::NonOrientable,
                    "inconsistently oriented faces across edges: " + listSimplices(flipped), std::move(flipped));
  edgeCount_ = static_cast<int>(edgeUses.size());

  faceAreas_.resize(nf);
  for (int f = 0; f < nf; ++f) {
    const auto& c = corners_[f];
    faceAreas_[f] = 0.5 * (c[1] - c[0]).cross(c[2] - c[0]).norm();
  }
  const double meanArea = faceAreas_.mean();
  std::vector<std::vector<int>> degenerate;
  for (int f = 0; f < nf; ++f) {
    if (!(faceAreas_[f] >= 1e-12 * meanArea)) degenerate.push_back({faces_[f][0], faces_[f][1], faces_[f][2]});
  }
  if (!degenerate.empty())
    throw MeshError(MeshError::Kind::DegenerateFace,
                    std::to_string(degenerate.size()) + " degenerate face(s): " + listSimplices(degenerate),
                    std::move(degenerate));

  vertexAreas_ = ScalarField::Zero(nv);
  angleDefects_ = ScalarField::Constant(nv, 2.0 * std::numbers::pi);
  std::map<EdgeKey, double> cotanWeight;
  std::map<EdgeKey, double> edgeLength;
  for (int f = 0; f < nf; ++f) {
    const auto& c = corners_[f];
    const auto& idx = faces_[f];
    const double twiceArea = 2.0 * faceAreas_[f];
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector3d e1 = c[(k + 1) % 3] - c[k];
      const Eigen::Vector3d e2 = c[(k + 2) % 3] - c[k];
      const double dot = e1.dot(e2);
      angleDefects_[idx[k]] -= std::atan2(twiceArea, dot);
      cotanWeight[undirected(idx[(k + 1) % 3], idx[(k + 2) % 3])] += 0.5 * dot / twiceArea;
      edgeLength[undirected(idx[k], idx[(k + 1) % 3])] = (c[(k + 1) % 3] - c[k]).norm();
      vertexAreas_[idx[k]] += faceAreas_[f] / 3.0;
    }
  }

  std::vector<std::vector<int>> isolated;
  for (int v = 0; v < nv; ++v) {
    if (vertexAreas_[v] <= 0.0) isolated.push_back({v});
  }
  if (!isolated.empty())
    throw MeshError(MeshError::Kind::Disconnected,
                    std::to_string(isolated.size()) + " vertex(es) not referenced by any face: " +
                        listSimplices(isolated),
                    std::move(isolated));

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(4 * cotanWeight.size());
  negativeCotanWeights_ = 0;
  for (const auto& [e, w] : cotanWeight) {
    if (w < 0.0) ++negativeCotanWeights_;
    triplets.emplace_back(e.first, e.second, -w);
    triplets.emplace_back(e.second, e.first, -w);
    triplets.emplace_back(e.first, e.first, w);
    triplets.emplace_back(e.second, e.second, w);
  }
  stiffness_.resize(nv, nv);
  stiffness_.setFromTriplets(triplets.begin(), triplets.end());

  edgeGraph_.assign(nv, {});
  double total = 0.0;
  for (const auto& [e, len] : edgeLength) {
    edgeGraph_[e.first].push_back({e.second, len});
    edgeGraph_[e.second].push_back({e.first, len});
    total += len;
  }
  meanEdgeLength_ = total / static_cast<double>(edgeLength.size());
}

ScalarField DiscreteManifold::gaussianCurvature() const { return angleDefects_.cwiseQuotient(vertexAreas_); }

DiscreteManifold DiscreteManifold::withReferenceCurvature(ScalarField curvature) && {
  if (curvature.size() != vertexCount()) throw InputError("reference curvature has wrong length");
  referenceCurvature_ = std::move(curvature);
  return std::move(*this);
}

DiscreteManifold DiscreteManifold::scaled(double s) const {
  if (!(s > 0.0)) throw InputError("metric scale factor must be positive");
  auto verts = vertices_;
  for (auto& v : verts) v *= s;
  auto corners = corners_;
  for (auto& c : corners) {
    for (auto& p : c) p *= s;
  }
  std::ostringstream name;
  name << descriptor_ << "*scale=" << s;
  DiscreteManifold out(std::move(verts), faces_, std::move(corners), name.str());
  if (referenceCurvature_) out.referenceCurvature_ = *referenceCurvature_ / (s * s);
  return out;
}

ScalarField rho_minus(const DiscreteManifold& m) {
  if (m.dimension() != 2) throw InputError("rho_minus requires a surface mesh");
  return (-m.gaussianCurvature()).cwiseMax(0.0);
}

ScalarField gradient_squared(const DiscreteManifold& m, const ScalarField& u) {
  if (u.size() != m.vertexCount()) throw InputError("field length does not match vertex count");
  if (!u.allFinite()) throw InputError("field has non-finite entries");
  ScalarField acc = ScalarField::Zero(m.vertexCount());
  ScalarField weight = ScalarField::Zero(m.vertexCount());
  for (int f = 0; f < m.faceCount(); ++f) {
    const auto& c = m.faceCorners(f);
    const auto& idx = m.faces()[f];
    const Eigen::Vector3d n = (c[1] - c[0]).cross(c[2] - c[0]);
    const double twiceArea = n.norm();
    const Eigen::Vector3d unit = n / twiceArea;
    Eigen::Vector3d grad = Eigen::Vector3d::Zero();
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector3d opposite = c[(k + 2) % 3] - c[(k + 1) % 3];
      grad += u[idx[k]] * unit.cross(opposite) / twiceArea;
    }
    const double g2 = grad.squaredNorm();
    const double area = m.faceAreas()[f];
    for (int v : idx) {
      acc[v] += area * g2;
      weight[v] += area;
    }
  }
  return acc.cwiseQuotient(weight);
}

} // namespace katolab
