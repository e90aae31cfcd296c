#pragma once

#include <Eigen/Dense>

namespace hirschfa::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct SymmetricEigen {
  Vector values;   // descending
  Matrix vectors;  // column j pairs with values(j); orthonormal
  int sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition. Throws NumericalError when `m` is not
/// square or is asymmetric beyond 1e-10 (relative to its largest entry).
SymmetricEigen symmetric_eigen(const Matrix& m);

/// Inverse of a symmetric positive-definite matrix through its
/// eigendecomposition. Throws NumericalError when the smallest eigenvalue is
/// not positive or the condition number exceeds `max_condition`.
Matrix spd_inverse(const Matrix& m, double max_condition = 1e12);

/// ln det of a symmetric positive-definite matrix; NumericalError otherwise.
double spd_log_det(const Matrix& m);

/// Frobenius norm of the strictly off-diagonal part.
double off_diagonal_norm(const Matrix& m);

}  // namespace hirschfa::linalg
