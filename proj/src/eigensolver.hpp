#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace katolab::detail {

struct Eigenpairs {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXd vectors; // Euclidean-orthonormal columns
};

/// Lowest `count` eigenpairs of a sparse symmetric matrix whose spectrum is
/// bounded below by `lowerBound`. Small problems use a dense solver; larger
/// ones ARPACK in shift-invert mode below the spectrum.
Eigenpairs lowest_eigenpairs(const Eigen::SparseMatrix<double>& a, int count, double lowerBound);

} // namespace katolab::detail
