#include "eigensolver.hpp"

#include "katolab/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <arpack/arpack.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace katolab::detail {

namespace {

constexpr int kDenseLimit = 1200;

Eigenpairs dense(const Eigen::SparseMatrix<double>& a, int count) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(a), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalError("dense symmetric eigensolver failed to converge");
  return {solver.eigenvalues().head(count), solver.eigenvectors().leftCols(count)};
}

Eigenpairs shiftInvert(const Eigen::SparseMatrix<double>& a, int count, double lowerBound) {
  const int n = static_cast<int>(a.rows());
  const double sigma = std::min(lowerBound, 0.0) - 1e-3 * (1.0 + std::abs(lowerBound));

  Eigen::SparseMatrix<double> shifted = a;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(shifted);
  if (factor.info() != Eigen::Success) throw NumericalError("shift-invert factorization failed");

  const int nev = count;
  const int ncv = std::min(n, std::max(2 * nev + 1, nev + 32));
  const int lworkl = ncv * (ncv + 8);
  const double tol = 1e-12;
  std::vector<double> resid(n), v(static_cast<std::size_t>(n) * ncv), workd(3 * static_cast<std::size_t>(n)),
      workl(lworkl);
  // Deterministic start vector so repeated runs agree bit for bit.
  for (int i = 0; i < n; ++i) resid[i] = 1.0 + 0.5 * std::sin(0.7 * i + 0.3);
  std::array<a_int, 11> iparam{};
  std::array<a_int, 14> ipntr{};
  iparam[0] = 1;
  iparam[2] = 3000;
  iparam[6] = 3;
  a_int ido = 0, info = 1;

  while (true) {
    arpack::saupd(ido, arpack::bmat::identity, n, arpack::which::largest_magnitude, nev, tol, resid.data(), ncv,
                  v.data(), n, iparam.data(), ipntr.data(), workd.data(), workl.data(), lworkl, info);
    if (ido == -1 || ido == 1) {
      Eigen::Map<const Eigen::VectorXd> x(workd.data() + ipntr[0] - 1, n);
      Eigen::Map<Eigen::VectorXd> y(workd.data() + ipntr[1] - 1, n);
      y = factor.solve(x);
    } else {
      break;
    }
  }
  if (info < 0) throw NumericalError("ARPACK saupd failed with info=" + std::to_string(info));
  if (info == 1) {
    std::ostringstream os;
    os << "ARPACK reached the iteration limit with " << iparam[4] << " of " << nev << " eigenpairs converged";
    throw NumericalError(os.str());
  }

  std::vector<a_int> select(ncv);
  std::vector<double> d(nev);
  Eigen::MatrixXd z(n, nev);
  arpack::seupd(1, arpack::howmny::ritz_vectors, select.data(), d.data(), z.data(), n, sigma, arpack::bmat::identity,
                n, arpack::which::largest_magnitude, nev, tol, resid.data(), ncv, v.data(), n, iparam.data(),
                ipntr.data(), workd.data(), workl.data(), lworkl, info);
  if (info != 0) throw NumericalError("ARPACK seupd failed with info=" + std::to_string(info));

  std::vector<int> order(nev);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });
  Eigenpairs out{Eigen::VectorXd(nev), Eigen::MatrixXd(n, nev)};
  for (int k = 0; k < nev; ++k) {
    out.values[k] = d[order[k]];
    out.vectors.col(k) = z.col(order[k]);
  }
  return out;
}

} // namespace

Eigenpairs lowest_eigenpairs(const Eigen::SparseMatrix<double>& a, int count, double lowerBound) {
  const int n = static_cast<int>(a.rows());
  if (count < 1 || count > n) throw InputError("requested eigenpair count out of range");
  Eigenpairs pairs = (n <= kDenseLimit || 2 * count > n) ? dense(a, count) : shiftInvert(a, count, lowerBound);

  // Residual check against the tolerance contract.
  const double scale = std::max(1.0, pairs.values.cwiseAbs().maxCoeff());
  double worst = 0.0;
  int worstIndex = 0;
  for (int k = 0; k < count; ++k) {
    const double r = (a * pairs.vectors.col(k) - pairs.values[k] * pairs.vectors.col(k)).norm();
    if (r > worst) {
      worst = r;
      worstIndex = k;
    }
  }
  if (worst > 1e-8 * scale) {
    std::ostringstream os;
    os << "eigensolver residual " << worst << " at pair " << worstIndex << " exceeds tolerance " << 1e-8 * scale;
    throw NumericalError(os.str());
  }

  // Fix the sign of each vector: largest-magnitude entry positive.
  for (int k = 0; k < count; ++k) {
    Eigen::Index at = 0;
    pairs.vectors.col(k).cwiseAbs().maxCoeff(&at);
    if (pairs.vectors(at, k) < 0.0) pairs.vectors.col(k) *= -1.0;
  }
  return pairs;
}

} // namespace katolab::detail
