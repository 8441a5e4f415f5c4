#pragma once

#include "katolab/flat_torus.hpp"
#include "katolab/manifold.hpp"

#include <Eigen/Core>

#include <optional>

namespace katolab {

/// Truncated eigen-decomposition of Delta + W on a weighted point set.
///
/// Eigenvectors are orthonormal in the inner product <f, g> = sum_x f g w_x,
/// where w are the vertex areas (mesh) or uniform grid weights (analytic
/// torus). `complete` marks a full basis, in which case the spectral calculus
/// is exact for the discrete operator.
class SpectralData {
public:
  SpectralData(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors, ScalarField weights,
               std::optional<ScalarField> potential, bool complete);

  int pointCount() const { return static_cast<int>(weights_.size()); }
  int modeCount() const { return static_cast<int>(eigenvalues_.size()); }
  bool isComplete() const { return complete_; }

  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
  const ScalarField& weights() const { return weights_; }
  const std::optional<ScalarField>& potential() const { return potential_; }
  double volume() const { return weights_.sum(); }

  /// Smallest t at which the dropped part of the spectrum is below
  /// 1e-8 / Vol in the exponential factor; zero for a complete basis.
  double kernelFloor() const;

  /// Spectral coefficients <f, phi_k>.
  Eigen::VectorXd coefficients(const ScalarField& f) const;
  double innerProduct(const ScalarField& f, const ScalarField& g) const;

private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  ScalarField weights_;
  std::optional<ScalarField> potential_;
  bool complete_;
};

/// Default truncation: min(500, point count).
int default_mode_count(int pointCount);

/// Lowest K generalized eigenpairs of (stiffness + diag(W * areas), diag(areas)).
/// K <= 0 selects the default. Throws NumericalError if the residual check fails.
SpectralData eigendecompose(const DiscreteManifold& m, const std::optional<ScalarField>& potential = std::nullopt,
                            int modeCount = 0);

/// Exact Fourier data of the flat torus sampled on its grid; only constant
/// potentials are representable (they shift every eigenvalue).
SpectralData eigendecompose(const AnalyticFlatTorus& torus, double constantPotential = 0.0, int modeCount = 0);

struct SemigroupResult {
  ScalarField values;
  /// Bound on the weighted L2 norm of the truncated part: exp(-lambda_{K-1} t) |f - Pi f|.
  double tailBound = 0.0;
};

/// e^{-t(Delta + W)} f by spectral calculus; t = 0 returns f itself.
SemigroupResult semigroup_apply(const SpectralData& s, const ScalarField& f, double t);

/// d/dt of e^{-t(Delta + W)} f, i.e. -sum lambda_k e^{-lambda_k t} <f, phi_k> phi_k.
ScalarField time_derivative(const SpectralData& s, const ScalarField& f, double t);

struct KernelMatrix {
  double t = 0.0;
  /// k_t(x, y) with respect to the weighted measure.
  Eigen::MatrixXd entries;

  /// max(0, -min entry): how far the discrete kernel departs from positivity.
  double positivityDefect() const;
};

/// Dense points above which kernel matrices are refused.
inline constexpr int kDenseKernelCap = 5000;

/// k_t(x,y) = sum_k e^{-lambda_k t} phi_k(x) phi_k(y). Refused below the kernel floor.
KernelMatrix kernel(const SpectralData& s, double t);

/// Diagonal k_t(x, x) without forming the matrix.
ScalarField kernel_diagonal(const SpectralData& s, double t);

struct OperatorNorms {
  double norm11 = 0.0;      ///< max_y sum_x |k(x,y)| w_x
  double normInfInf = 0.0;  ///< max_x sum_y |k(x,y)| w_y
  double norm1Inf = 0.0;    ///< max |k(x,y)|
};

OperatorNorms op_norms(const KernelMatrix& k, const ScalarField& weights);

/// Norms from matrix-vector passes, for point sets above the dense cap. Exact
/// when the kernel is entrywise nonnegative: both L1 norms are max |P_t 1|
/// (symmetric kernel) and norm1Inf is the largest diagonal entry (kernel is
/// positive semidefinite).
OperatorNorms op_norms_matrix_free(const SpectralData& s, double t);

} // namespace katolab
