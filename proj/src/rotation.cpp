#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "hirschfa/efa.hpp"

namespace hirschfa::efa {

namespace {

constexpr double kCriterionTol = 1e-8;
constexpr int kMaxSweeps = 1000;

double varimax_criterion(const Matrix& a) {
  const double p = static_cast<double>(a.rows());
  double total = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const auto sq = a.col(j).array().square();
    const double mean_sq = sq.sum() / p;
    total += sq.square().sum() / p - mean_sq * mean_sq;
  }
  return total;
}

Vector row_norms(const Matrix& l) {
  Vector h = l.rowwise().norm();
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    if (!(h(i) > 0.0)) h(i) = 1.0;
  }
  return h;
}

}  // namespace

std::pair<std::vector<int>, std::vector<int>> normalize_columns(Matrix& loadings) {
  const auto m = static_cast<int>(loadings.cols());
  const Vector ss = loadings.colwise().squaredNorm().transpose();
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return ss(a) > ss(b); });
  std::vector<int> signs(static_cast<std::size_t>(m), 1);
  Matrix out(loadings.rows(), loadings.cols());
  for (int j = 0; j < m; ++j) {
    out.col(j) = loadings.col(perm[static_cast<std::size_t>(j)]);
    if (out.col(j).sum() < 0.0) {
      out.col(j) = -out.col(j);
      signs[static_cast<std::size_t>(j)] = -1;
    }
  }
  loadings = std::move(out);
  return {perm, signs};
}

VarimaxResult varimax(const LoadingMatrix& l, bool kaiser_normalize) {
  if (l.rotation != Rotation::none) {
    throw ValidationError("varimax expects unrotated loadings");
  }
  const Eigen::Index p = l.variables();
  const Eigen::Index m = l.factors();
  VarimaxResult res;
  res.rotation = Matrix::Identity(m, m);

  const Vector h = kaiser_normalize ? row_norms(l.values) : Vector::Ones(p);
  Matrix a = h.cwiseInverse().asDiagonal() * l.values;
  res.criterion_trace.push_back(varimax_criterion(a));

  if (p > 1 && m > 1) {
    const double pd = static_cast<double>(p);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      for (Eigen::Index i = 0; i < m - 1; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
          const Vector x = a.col(i);
          const Vector y = a.col(j);
          const Eigen::ArrayXd u = x.array().square() - y.array().square();
          const Eigen::ArrayXd v = 2.0 * x.array() * y.array();
          const double sa = u.sum();
          const double sb = v.sum();
          const double sc = (u.square() - v.square()).sum();
          const double sd = 2.0 * (u * v).sum();
          const double num = sd - 2.0 * sa * sb / pd;
          const double den = sc - (sa * sa - sb * sb) / pd;
          const double phi = 0.25 * std::atan2(num, den);
          const double c = std::cos(phi);
          const double s = std::sin(phi);
          a.col(i) = c * x + s * y;
          a.col(j) = -s * x + c * y;
          const Vector ti = res.rotation.col(i);
          const Vector tj = res.rotation.col(j);
          res.rotation.col(i) = c * ti + s * tj;
          res.rotation.col(j) = -s * ti + c * tj;
        }
      }
      res.sweeps = sweep + 1;
      res.criterion_trace.push_back(varimax_criterion(a));
      const auto k = res.criterion_trace.size();
      if (res.criterion_trace[k - 1] - res.criterion_trace[k - 2] < kCriterionTol) break;
    }
  }

  Matrix rotated = h.asDiagonal() * a;
  const auto [perm, signs] = normalize_columns(rotated);
  Matrix t(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    t.col(j) = signs[static_cast<std::size_t>(j)] * res.rotation.col(perm[static_cast<std::size_t>(j)]);
  }
  res.rotation = std::move(t);
  res.rotated = LoadingMatrix{std::move(rotated), Rotation::varimax, l.labels};
  return res;
}

PromaxResult promax(const LoadingMatrix& l_varimax, int kappa) {
  if (l_varimax.rotation != Rotation::varimax) {
    throw ValidationError("promax expects varimax-rotated loadings");
  }
  if (kappa < 1) throw ValidationError(fmt::format("promax exponent must be >= 1, got {}", kappa));

  const Vector h = row_norms(l_varimax.values);
  const Matrix v = h.cwiseInverse().asDiagonal() * l_varimax.values;
  const Matrix target = v.unaryExpr([kappa](double x) {
    return std::copysign(std::pow(std::abs(x), kappa), x);
  });

  const Matrix vtv = v.transpose() * v;
  Eigen::FullPivLU<Matrix> vtv_lu(vtv);
  vtv_lu.setThreshold(1e-12);
  if (!vtv_lu.isInvertible()) throw NumericalError("promax: V'V is singular");
  Matrix t = vtv_lu.solve(v.transpose() * target);

  Eigen::FullPivLU<Matrix> t_lu(t);
  t_lu.setThreshold(1e-12);
  if (!t_lu.isInvertible()) throw NumericalError("promax: target transformation is singular");
  const Matrix ttt_inv = (t.transpose() * t).inverse();
  t = t * ttt_inv.diagonal().cwiseSqrt().asDiagonal();

  const Matrix t_inv = t.inverse();
  PromaxResult res;
  res.phi = t_inv * t_inv.transpose();
  res.phi = 0.5 * (res.phi + res.phi.transpose()).eval();
  res.phi.diagonal().setOnes();
  Matrix pattern = h.asDiagonal() * (v * t);
  res.structure = pattern * res.phi;
  res.pattern = LoadingMatrix{std::move(pattern), Rotation::promax, l_varimax.labels};
  return res;
}

}  // namespace hirschfa::efa
