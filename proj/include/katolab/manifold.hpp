#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace katolab {

/// One real per vertex (or per grid sample for the analytic backend).
using ScalarField = Eigen::VectorXd;

using Face = std::array<int, 3>;

/// Corner positions of one triangle in a frame where the triangle is flat and
/// its edge vectors carry the metric. For embedded meshes these are the vertex
/// positions; periodic domains store unwrapped copies.
using FaceCorners = std::array<Eigen::Vector3d, 3>;

struct EdgeNeighbor {
  int vertex;
  double length;
};

/// Closed, oriented triangle surface with linear finite element operators.
///
/// Stiffness uses cotangent weights with the sign convention Delta >= 0; the
/// mass matrix is lumped (barycentric vertex areas). Immutable after
/// construction; the constructor validates that every edge is shared by
/// exactly two consistently oriented faces and that no face is degenerate,
/// throwing MeshError otherwise.
class DiscreteManifold {
public:
  DiscreteManifold(std::vector<Eigen::Vector3d> vertices, std::vector<Face> faces, std::string descriptor);
  DiscreteManifold(std::vector<Eigen::Vector3d> vertices, std::vector<Face> faces, std::vector<FaceCorners> corners,
                   std::string descriptor);

  int dimension() const { return 2; }
  int vertexCount() const { return static_cast<int>(vertices_.size()); }
  int faceCount() const { return static_cast<int>(faces_.size()); }
  int edgeCount() const { return edgeCount_; }
  int eulerCharacteristic() const { return vertexCount() - edgeCount() + faceCount(); }

  const std::vector<Eigen::Vector3d>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  const FaceCorners& faceCorners(int f) const { return corners_[f]; }
  const std::string& descriptor() const { return descriptor_; }

  const ScalarField& vertexAreas() const { return vertexAreas_; }
  const Eigen::VectorXd& faceAreas() const { return faceAreas_; }
  const Eigen::SparseMatrix<double>& stiffness() const { return stiffness_; }
  const ScalarField& angleDefects() const { return angleDefects_; }
  const std::vector<std::vector<EdgeNeighbor>>& edgeGraph() const { return edgeGraph_; }

  /// Angle defect divided by vertex area.
  ScalarField gaussianCurvature() const;

  double volume() const { return vertexAreas_.sum(); }
  double meanEdgeLength() const { return meanEdgeLength_; }

  /// Edges whose summed cotangent weight is negative (non-Delaunay).
  int negativeCotanWeights() const { return negativeCotanWeights_; }

  /// Closed-form curvature supplied by analytic builders, if any.
  const std::optional<ScalarField>& referenceCurvature() const { return referenceCurvature_; }
  DiscreteManifold withReferenceCurvature(ScalarField curvature) &&;

  /// Metric scaled by s^2 (all lengths times s). Curvature scales by 1/s^2.
  DiscreteManifold scaled(double s) const;

private:
  void assemble();

  std::vector<Eigen::Vector3d> vertices_;
  std::vector<Face> faces_;
  std::vector<FaceCorners> corners_;
  std::string descriptor_;

  int edgeCount_ = 0;
  int negativeCotanWeights_ = 0;
  double meanEdgeLength_ = 0.0;
  ScalarField vertexAreas_;
  Eigen::VectorXd faceAreas_;
  ScalarField angleDefects_;
  Eigen::SparseMatrix<double> stiffness_;
  std::vector<std::vector<EdgeNeighbor>> edgeGraph_;
  std::optional<ScalarField> referenceCurvature_;
};

/// Negative part of the smallest Ricci eigenvalue. On surfaces Ric = K g, so
/// this is max(0, -K) with K the discrete Gaussian curvature.
ScalarField rho_minus(const DiscreteManifold& m);

/// |grad u|^2 of the piecewise-linear interpolant, averaged from faces to
/// vertices with face-area weights.
ScalarField gradient_squared(const DiscreteManifold& m, const ScalarField& u);

/// Shortest-path distance along mesh edges from one vertex. Overestimates the
/// true geodesic distance.
ScalarField geodesic_distance(const DiscreteManifold& m, int source);

/// Farthest-point sample of `count` vertices, starting at vertex 0.
std::vector<int> farthest_point_samples(const DiscreteManifold& m, int count);

/// Max over 16 farthest-point sources of the edge-graph eccentricity.
double diameter(const DiscreteManifold& m);

} // namespace katolab
