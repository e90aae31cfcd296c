#include "hirschfa/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "hirschfa/errors.hpp"

namespace hirschfa::linalg {

namespace {

constexpr int kMaxSweeps = 100;

}  // namespace

double off_diagonal_norm(const Matrix& m) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j) sum += m(i, j) * m(i, j);
    }
  }
  return std::sqrt(sum);
}

SymmetricEigen symmetric_eigen(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw NumericalError(fmt::format("symmetric_eigen: matrix is {}x{}, not square", m.rows(), m.cols()));
  }
  const Eigen::Index n = m.rows();
  const double scale = n > 0 ? std::max(m.cwiseAbs().maxCoeff(), 1.0) : 1.0;
  if (n > 0 && (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw NumericalError("symmetric_eigen: matrix is not symmetric");
  }

  Matrix a = 0.5 * (m + m.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double target = 1e-12 * std::max(a.norm(), std::numeric_limits<double>::min());

  int sweep = 0;
  for (; sweep < kMaxSweeps && off_diagonal_norm(a) >= target; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle that zeroes a(p,q) (Rutishauser's stable form).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) > a(y, y); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.sweeps = sweep;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto src = order[static_cast<std::size_t>(j)];
    out.values(j) = a(src, src);
    out.vectors.col(j) = v.col(src);
  }
  return out;
}

Matrix spd_inverse(const Matrix& m, double max_condition) {
  const auto eig = symmetric_eigen(m);
  const Eigen::Index n = eig.values.size();
  if (n == 0) return Matrix(0, 0);
  const double largest = eig.values(0);
  const double smallest = eig.values(n - 1);
  if (!(smallest > 0.0) || largest / smallest > max_condition) {
    throw NumericalError(fmt::format(
        "matrix is singular or not positive definite (eigenvalues in [{:.3g}, {:.3g}])", smallest,
        largest));
  }
  return eig.vectors * eig.values.cwiseInverse().asDiagonal() * eig.vectors.transpose();
}

double spd_log_det(const Matrix& m) {
  const auto eig = symmetric_eigen(m);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (!(eig.values(i) > 0.0)) {
      throw NumericalError("determinant is not positive");
    }
    log_det += std::log(eig.values(i));
  }
  return log_det;
}

}  // namespace hirschfa::linalg
