#include "fgflutter/modal_basis.hpp"

#include "fgflutter/error.hpp"

#include <Eigen/SparseCholesky>
#include <arpack/arpack.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <string>

namespace fgflutter {

namespace {
// The reference ARPACK keeps its iteration state in Fortran SAVE variables.
std::mutex arpack_mutex;
}  // namespace

ModalBasis lowest_modes(const SparseMatrix& K, const SparseMatrix& M, const ModalBasisOptions& options) {
  const int n = static_cast<int>(K.rows());
  if (K.cols() != n || M.rows() != n || M.cols() != n) throw std::invalid_argument("lowest_modes: shape mismatch");
  const int nev = std::min(options.modes, n - 2);
  if (nev < 1) throw NumericError("lowest_modes: system too small for the requested modes");

  const SparseMatrix shifted = K - options.shift * M;
  Eigen::SimplicialLDLT<SparseMatrix> solver(shifted);
  if (solver.info() != Eigen::Success) throw NumericError("lowest_modes: factorization of K - sigma M failed");
  const Eigen::VectorXd pivots = solver.vectorD();
  if ((pivots.array().abs() <= 1e-14 * pivots.cwiseAbs().maxCoeff()).any()) {
    throw NumericError("lowest_modes: K - sigma M is singular");
  }

  const int ncv = std::min(n, std::max(2 * nev + 1, nev + 20));
  const int lworkl = ncv * (ncv + 8);
  std::vector<double> resid(n), v(static_cast<std::size_t>(n) * ncv), workd(3 * static_cast<std::size_t>(n)),
      workl(lworkl);
  // Deterministic, non-degenerate start vector.
  for (int i = 0; i < n; ++i) resid[i] = 1.0 + 0.5 * std::sin(0.7 * i + 0.3) + 0.25 * std::cos(1.3 * i);
  int iparam[11] = {0};
  int ipntr[14] = {0};
  iparam[0] = 1;  // exact shifts
  iparam[2] = options.max_restarts;
  iparam[6] = 3;  // shift-invert, generalized
  int ido = 0;
  int info = 1;  // use resid as the start vector

  Eigen::VectorXd tmp(n);
  std::lock_guard<std::mutex> lock(arpack_mutex);
  while (true) {
    arpack::saupd(ido, arpack::bmat::generalized, n, arpack::which::largest_magnitude, nev,
                  options.tolerance, resid.data(), ncv, v.data(), n, iparam, ipntr, workd.data(),
                  workl.data(), lworkl, info);
    if (ido == -1) {
      Eigen::Map<const Eigen::VectorXd> x(&workd[ipntr[0] - 1], n);
      Eigen::Map<Eigen::VectorXd> y(&workd[ipntr[1] - 1], n);
      tmp = M * x;
      y = solver.solve(tmp);
    } else if (ido == 1) {
      Eigen::Map<const Eigen::VectorXd> Bx(&workd[ipntr[2] - 1], n);
      Eigen::Map<Eigen::VectorXd> y(&workd[ipntr[1] - 1], n);
      y = solver.solve(Bx);
    } else if (ido == 2) {
      Eigen::Map<const Eigen::VectorXd> x(&workd[ipntr[0] - 1], n);
      Eigen::Map<Eigen::VectorXd> y(&workd[ipntr[1] - 1], n);
      y = M * x;
    } else {
      break;
    }
  }
  if (info < 0) throw NumericError("ARPACK dsaupd failed with info = " + std::to_string(info));
  if (info == 1) throw NumericError("ARPACK dsaupd reached the restart limit without converging");

  std::vector<int> select(ncv, 0);
  std::vector<double> d(nev);
  std::vector<double> z(static_cast<std::size_t>(n) * nev);
  arpack::seupd(1, arpack::howmny::ritz_vectors, select.data(), d.data(), z.data(), n, options.shift,
                arpack::bmat::generalized, n, arpack::which::largest_magnitude, nev, options.tolerance,
                resid.data(), ncv, v.data(), n, iparam, ipntr, workd.data(), workl.data(), lworkl, info);
  if (info != 0) throw NumericError("ARPACK dseupd failed with info = " + std::to_string(info));
  const int converged = iparam[4];
  if (converged < nev) {
    throw NumericError("ARPACK converged " + std::to_string(converged) + " of " + std::to_string(nev) + " modes");
  }

  std::vector<int> order(nev);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });
  ModalBasis basis;
  basis.values.resize(nev);
  basis.vectors.resize(n, nev);
  Eigen::Map<const Eigen::MatrixXd> Z(z.data(), n, nev);
  for (int k = 0; k < nev; ++k) {
    basis.values(k) = d[order[k]];
    basis.vectors.col(k) = Z.col(order[k]);
  }
  return basis;
}

}  // namespace fgflutter
