#pragma once

#include "fgflutter/assembly.hpp"

#include <Eigen/Dense>

namespace fgflutter {

/// Lowest eigenpairs of the symmetric-definite pencil (K, M).
struct ModalBasis {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // M-orthonormal columns
};

struct ModalBasisOptions {
  int modes = 40;
  double shift = 0.0;      // shift-invert pole
  double tolerance = 1e-12;
  int max_restarts = 1000;
};

/// Shift-invert Lanczos (ARPACK) on (K, M) with a sparse LDL^T of K - shift M.
/// Throws NumericError on a singular shifted matrix or when ARPACK fails.
ModalBasis lowest_modes(const SparseMatrix& K, const SparseMatrix& M, const ModalBasisOptions& options = {});

}  // namespace fgflutter
