#pragma once

#include <Eigen/Core>

#include <span>
#include <utility>
#include <vector>

namespace katolab {

/// Real Fourier mode on a flat torus: 1, cos(2 pi k.x/L) or sin(2 pi k.x/L),
/// normalized in L^2 of the (unnormalized) volume measure.
struct FourierMode {
  enum class Kind { Constant, Cos, Sin };
  std::vector<int> k;
  Kind kind = Kind::Constant;
  double eigenvalue = 0.0;
};

/// Exact flat torus R^n / (L_1 Z x ... x L_n Z). Ricci curvature vanishes, so
/// it serves as the oracle manifold with rho_- = 0 in any dimension.
class AnalyticFlatTorus {
public:
  AnalyticFlatTorus(std::vector<double> periods, int modeCutoff);

  int dimension() const { return static_cast<int>(periods_.size()); }
  const std::vector<double>& periods() const { return periods_; }
  int modeCutoff() const { return modeCutoff_; }

  double volume() const;
  /// Half the diagonal of the fundamental box.
  double diameter() const;
  /// Flat-torus distance (minimum over lattice translates).
  double distance(std::span<const double> x, std::span<const double> y) const;

  /// All modes with |k_i| <= modeCutoff, sorted by eigenvalue 4 pi^2 sum (k_i/L_i)^2.
  const std::vector<FourierMode>& modes() const { return modes_; }
  std::vector<double> eigenvalues() const;

  FourierMode mode(std::vector<int> k, FourierMode::Kind kind) const;
  double modeValue(const FourierMode& mode, std::span<const double> x) const;
  Eigen::VectorXd modeGradient(const FourierMode& mode, std::span<const double> x) const;

  /// Points per axis of the sampling grid; exceeds twice the cutoff so the
  /// sampled modes stay exactly orthonormal.
  int gridResolution() const { return 2 * modeCutoff_ + 2; }
  /// Grid points, row-major with the last axis fastest.
  std::vector<Eigen::VectorXd> gridPoints() const;

  /// Heat kernel p_t(x, y) as a product of 1-D spectral theta sums.
  double heatKernel(double t, std::span<const double> x, std::span<const double> y) const;
  /// p_t(x, x), independent of x.
  double heatKernelDiagonal(double t) const;

private:
  std::vector<double> periods_;
  int modeCutoff_;
  std::vector<FourierMode> modes_;
};

/// (1/L) sum_k exp(-4 pi^2 k^2 t / L^2) cos(2 pi k x / L): the 1-D periodic heat kernel.
double theta_spectral(double t, double period, double x = 0.0);
/// The same kernel as a sum of Gaussian images (4 pi t)^{-1/2} sum_m exp(-(x - mL)^2 / 4t).
double theta_images(double t, double period, double x = 0.0);

/// Finite Fourier series solution u(x,t) = sum_m a_m exp(-lambda_m t) psi_m(x) of
/// the heat equation, with psi_m the unnormalized modes 1, cos, sin and a_m
/// plain amplitudes. Values, gradients and time derivatives are exact.
class FourierSolution {
public:
  FourierSolution(const AnalyticFlatTorus& torus, std::vector<std::pair<FourierMode, double>> terms);

  double value(std::span<const double> x, double t) const;
  Eigen::VectorXd gradient(std::span<const double> x, double t) const;
  double timeDerivative(std::span<const double> x, double t) const;
  /// Constant amplitude minus the sum of the other |a_m|; a lower bound on u for all t >= 0.
  double minimumBound() const;

  const std::vector<std::pair<FourierMode, double>>& terms() const { return terms_; }

private:
  std::vector<double> periods_;
  std::vector<std::pair<FourierMode, double>> terms_;
};

} // namespace katolab
