#include "katolab/spectral.hpp"

#include "eigensolver.hpp"
#include "katolab/error.hpp"

#include <algorithm>
#include <cmath>

namespace katolab {

SpectralData::SpectralData(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors, ScalarField weights,
                           std::optional<ScalarField> potential, bool complete)
    : eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)), weights_(std::move(weights)),
      potential_(std::move(potential)), complete_(complete) {
  if (eigenvectors_.rows() != weights_.size() || eigenvectors_.cols() != eigenvalues_.size())
    throw InputError("spectral data dimensions are inconsistent");
}

double SpectralData::kernelFloor() const {
  if (complete_ || modeCount() == 0) return 0.0;
  const double top = eigenvalues_[modeCount() - 1];
  if (!(top > 0.0)) return std::numeric_limits<double>::infinity();
  return std::max(0.0, (std::log(1e8) + std::log(volume())) / top);
}

Eigen::VectorXd SpectralData::coefficients(const ScalarField& f) const {
  if (f.size() != pointCount()) throw InputError("field length does not match spectral data");
  return eigenvectors_.transpose() * f.cwiseProduct(weights_);
}

double SpectralData::innerProduct(const ScalarField& f, const ScalarField& g) const {
  return f.cwiseProduct(g).dot(weights_);
}

int default_mode_count(int pointCount) { return std::min(500, pointCount); }

SpectralData eigendecompose(const DiscreteManifold& m, const std::optional<ScalarField>& potential, int modeCount) {
  const int n = m.vertexCount();
  const int k = modeCount > 0 ? modeCount : default_mode_count(n);
  if (k > n) throw InputError("mode count exceeds vertex count");
  if (potential) {
    if (potential->size() != n) throw InputError("potential length does not match vertex count");
    if (!potential->allFinite()) throw InputError("potential has non-finite entries");
  }
  const ScalarField& area = m.vertexAreas();
  const Eigen::VectorXd invSqrt = area.cwiseSqrt().cwiseInverse();

  // Symmetric form M^{-1/2} (L + diag(W a)) M^{-1/2}; the potential lands on the diagonal as W.
  Eigen::SparseMatrix<double> a = invSqrt.asDiagonal() * m.stiffness() * invSqrt.asDiagonal();
  double lower = 0.0;
  if (potential) {
    for (int i = 0; i < n; ++i) a.coeffRef(i, i) += (*potential)[i];
    lower = potential->minCoeff();
  }
  a.makeCompressed();
  auto pairs = detail::lowest_eigenpairs(a, k, lower);
  Eigen::MatrixXd vectors = invSqrt.asDiagonal() * pairs.vectors;
  return SpectralData(std::move(pairs.values), std::move(vectors), area, potential, k == n);
}

SpectralData eigendecompose(const AnalyticFlatTorus& torus, double constantPotential, int modeCount) {
  if (!std::isfinite(constantPotential)) throw InputError("potential must be finite");
  const auto& modes = torus.modes();
  const int available = static_cast<int>(modes.size());
  const int k = modeCount > 0 ? modeCount : std::min(500, available);
  if (k > available) throw InputError("mode count exceeds the torus mode cutoff");
  const auto points = torus.gridPoints();
  const int n = static_cast<int>(points.size());

  Eigen::VectorXd values(k);
  Eigen::MatrixXd vectors(n, k);
  for (int j = 0; j < k; ++j) {
    values[j] = modes[j].eigenvalue + constantPotential;
    for (int i = 0; i < n; ++i) {
      vectors(i, j) = torus.modeValue(modes[j], std::span<const double>(points[i].data(), points[i].size()));
    }
  }
  ScalarField weights = ScalarField::Constant(n, torus.volume() / n);
  std::optional<ScalarField> potential;
  if (constantPotential != 0.0) potential = ScalarField::Constant(n, constantPotential);
  return SpectralData(std::move(values), std::move(vectors), std::move(weights), std::move(potential), false);
}

SemigroupResult semigroup_apply(const SpectralData& s, const ScalarField& f, double t) {
  if (!(t >= 0.0)) throw InputError("semigroup time must be nonnegative");
  if (f.size() != s.pointCount()) throw InputError("field length does not match spectral data");
  SemigroupResult out;
  if (t == 0.0) {
    out.values = f;
    return out;
  }
  const Eigen::VectorXd c = s.coefficients(f);
  const Eigen::VectorXd decay = (-t * s.eigenvalues().array()).exp().matrix();
  out.values = s.eigenvectors() * c.cwiseProduct(decay);
  if (!s.isComplete()) {
    const ScalarField residual = f - s.eigenvectors() * c;
    const double residualNorm = std::sqrt(std::max(0.0, s.innerProduct(residual, residual)));
    out.tailBound = std::exp(-t * s.eigenvalues()[s.modeCount() - 1]) * residualNorm;
  }
  return out;
}

ScalarField time_derivative(const SpectralData& s, const ScalarField& f, double t) {
  if (!(t >= 0.0)) throw InputError("semigroup time must be nonnegative");
  const Eigen::VectorXd c = s.coefficients(f);
  const Eigen::VectorXd rate =
      (-s.eigenvalues().array() * (-t * s.eigenvalues().array()).exp()).matrix();
  return s.eigenvectors() * c.cwiseProduct(rate);
}

double KernelMatrix::positivityDefect() const { return std::max(0.0, -entries.minCoeff()); }

KernelMatrix kernel(const SpectralData& s, double t) {
  if (s.pointCount() > kDenseKernelCap)
    throw InputError("dense kernel refused above " + std::to_string(kDenseKernelCap) +
                     " points; use op_norms_matrix_free");
  const double floor = s.kernelFloor();
  if (!(t >= 0.0)) throw InputError("kernel time must be nonnegative");
  if (!s.isComplete() && !(t > floor)) {
    throw InputError("kernel time " + std::to_string(t) + " is below the truncation floor t_min=" +
                     std::to_string(floor) + " (exp(-lambda_{K-1} t) would exceed 1e-8/Vol)");
  }
  const Eigen::VectorXd decay = (-t * s.eigenvalues().array()).exp().matrix();
  const Eigen::MatrixXd scaled = s.eigenvectors() * decay.asDiagonal();
  KernelMatrix k;
  k.t = t;
  k.entries = scaled * s.eigenvectors().transpose();
  return k;
}

ScalarField kernel_diagonal(const SpectralData& s, double t) {
  if (!(t >= 0.0)) throw InputError("kernel time must be nonnegative");
  const Eigen::VectorXd decay = (-t * s.eigenvalues().array()).exp().matrix();
  return s.eigenvectors().array().square().matrix() * decay;
}

OperatorNorms op_norms(const KernelMatrix& k, const ScalarField& weights) {
  const Eigen::MatrixXd& e = k.entries;
  if (e.rows() != e.cols() || e.rows() != weights.size()) throw InputError("kernel and weights disagree in size");
  const Eigen::MatrixXd absEntries = e.cwiseAbs();
  OperatorNorms n;
  n.normInfInf = (absEntries * weights).maxCoeff();
  n.norm11 = (absEntries.transpose() * weights).maxCoeff();
  n.norm1Inf = absEntries.maxCoeff();
  return n;
}

OperatorNorms op_norms_matrix_free(const SpectralData& s, double t) {
  const ScalarField ones = ScalarField::Ones(s.pointCount());
  const double rowSum = semigroup_apply(s, ones, t).values.cwiseAbs().maxCoeff();
  OperatorNorms n;
  n.normInfInf = rowSum;
  n.norm11 = rowSum;
  n.norm1Inf = kernel_diagonal(s, t).maxCoeff();
  return n;
}

} // namespace katolab
