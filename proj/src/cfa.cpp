#include "hirschfa/cfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "hirschfa/optimize.hpp"

namespace hirschfa::cfa {

namespace {

constexpr double kUniquenessFloor = 1e-4;
constexpr double kGradTol = 1e-5;

struct Layout {
  Eigen::Index p = 0;
  Eigen::Index m = 0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> loadings;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> correlations;

  Eigen::Index size() const {
    return static_cast<Eigen::Index>(loadings.size() + correlations.size()) + p;
  }
  Eigen::Index theta_offset() const { return static_cast<Eigen::Index>(loadings.size() + correlations.size()); }
};

Layout make_layout(const PatternSpec& spec) {
  Layout lay;
  lay.p = spec.variables();
  lay.m = spec.factors();
  for (Eigen::Index j = 0; j < lay.m; ++j) {
    for (Eigen::Index i = 0; i < lay.p; ++i) {
      if (spec.loadings(i, j)) lay.loadings.emplace_back(i, j);
    }
  }
  for (Eigen::Index a = 0; a < lay.m; ++a) {
    for (Eigen::Index b = a + 1; b < lay.m; ++b) {
      if (spec.phi_free(a, b) || spec.phi_free(b, a)) lay.correlations.emplace_back(a, b);
    }
  }
  return lay;
}

void unpack(const Layout& lay, const Vector& x, Matrix& lambda, Matrix& phi, Vector& theta) {
  lambda = Matrix::Zero(lay.p, lay.m);
  phi = Matrix::Identity(lay.m, lay.m);
  Eigen::Index k = 0;
  for (const auto& [i, j] : lay.loadings) lambda(i, j) = x(k++);
  for (const auto& [a, b] : lay.correlations) phi(a, b) = phi(b, a) = x(k++);
  theta = x.segment(k, lay.p);
}

}  // namespace

int PatternSpec::free_parameters() const {
  const auto lay = make_layout(*this);
  return static_cast<int>(lay.size());
}

void check_identified(const PatternSpec& spec) {
  const Eigen::Index p = spec.variables();
  const Eigen::Index m = spec.factors();
  if (m < 1 || p < 1) throw ValidationError("pattern has no variables or no factors");
  if (spec.phi_free.rows() != m || spec.phi_free.cols() != m) {
    throw ValidationError("factor correlation mask must be m x m");
  }
  if (static_cast<Eigen::Index>(spec.labels.size()) != p) {
    throw ValidationError("pattern label count does not match its rows");
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    if (!spec.loadings.row(i).any()) {
      throw ValidationError(fmt::format("variable '{}' has no free loading", spec.labels[static_cast<std::size_t>(i)]));
    }
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto indicators = spec.loadings.col(j).count();
    if (indicators < 2) {
      throw ValidationError(fmt::format("factor {} has {} indicator(s); at least 2 are required", j + 1, indicators));
    }
    if (p - indicators < m - 1) {
      throw ValidationError(fmt::format("factor {} needs at least {} fixed zero loading(s)", j + 1, m - 1));
    }
  }
  const int moments = static_cast<int>(p * (p + 1) / 2);
  if (spec.free_parameters() > moments) {
    throw ValidationError(fmt::format("model has {} free parameters but only {} distinct moments",
                                      spec.free_parameters(), moments));
  }
}

PatternSpec pattern_from_efa(const efa::LoadingMatrix& l, double threshold, bool assign_max_if_none) {
  if (!(threshold >= 0.0)) throw ValidationError("pattern threshold must be nonnegative");
  PatternSpec spec;
  spec.labels = l.labels;
  spec.loadings = l.values.array().abs() > threshold;
  spec.phi_free = Mask::Constant(l.factors(), l.factors(), true);
  for (Eigen::Index i = 0; i < l.variables(); ++i) {
    if (spec.loadings.row(i).any()) continue;
    Eigen::Index best = 0;
    const double top = l.values.row(i).cwiseAbs().maxCoeff(&best);
    if (!assign_max_if_none || top == 0.0) {
      throw ValidationError(fmt::format("variable '{}' has no loading above {}",
                                        l.labels[static_cast<std::size_t>(i)], threshold));
    }
    spec.loadings(i, best) = true;
  }
  check_identified(spec);
  return spec;
}

Matrix implied_covariance(const Matrix& lambda, const Matrix& phi, const Vector& theta) {
  Matrix sigma = lambda * phi * lambda.transpose();
  sigma.diagonal() += theta;
  return sigma;
}

double ml_discrepancy(const Matrix& s, const Matrix& sigma) {
  Eigen::LLT<Matrix> chol(sigma);
  if (chol.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  Eigen::LLT<Matrix> chol_s(s);
  if (chol_s.info() != Eigen::Success) throw NumericalError("analyzed matrix is not positive definite");
  const auto log_det = [](const Eigen::LLT<Matrix>& c) {
    return 2.0 * c.matrixL().toDenseMatrix().diagonal().array().log().sum();
  };
  const double trace = chol.solve(s).trace();
  return log_det(chol) + trace - log_det(chol_s) - static_cast<double>(s.rows());
}

CFAFit cfa_fit(const efa::CorrelationMatrix& s, int n, const PatternSpec& spec) {
  check_identified(spec);
  const Eigen::Index p = spec.variables();
  const Eigen::Index m = spec.factors();
  if (s.dim() != p) {
    throw ValidationError(fmt::format("pattern has {} variables but the matrix is {}x{}", p, s.dim(), s.dim()));
  }
  if (n <= p) throw ValidationError(fmt::format("CFA needs n > p (n = {}, p = {})", n, p));
  if (!std::isfinite(linalg::spd_log_det(s.values))) throw NumericalError("analyzed matrix is singular");

  const Layout lay = make_layout(spec);
  const Eigen::Index k_theta = lay.theta_offset();

  Vector x0(lay.size());
  Eigen::Index k = 0;
  for (const auto& [i, j] : lay.loadings) {
    double sum = 0.0;
    int count = 0;
    for (Eigen::Index r = 0; r < p; ++r) {
      if (r != i && spec.loadings(r, j)) {
        sum += std::abs(s.values(i, r));
        ++count;
      }
    }
    const double mean_r = count > 0 ? sum / count : 0.25;
    x0(k++) = std::sqrt(std::max(0.05, mean_r) * s.values(i, i)) /
              std::sqrt(static_cast<double>(spec.loadings.row(i).count()));
  }
  for (std::size_t c = 0; c < lay.correlations.size(); ++c) x0(k++) = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) {
    double common = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      for (std::size_t q = 0; q < lay.loadings.size(); ++q) {
        if (lay.loadings[q] == std::pair{i, j}) common += x0(static_cast<Eigen::Index>(q)) * x0(static_cast<Eigen::Index>(q));
      }
    }
    x0(k++) = std::max(0.1 * s.values(i, i), s.values(i, i) - common);
  }

  const auto objective = [&](const Vector& x) {
    Matrix lambda, phi;
    Vector theta;
    unpack(lay, x, lambda, phi, theta);
    if ((theta.array() <= 0.0).any()) return std::numeric_limits<double>::infinity();
    Eigen::LLT<Matrix> phi_chol(phi);
    if (phi_chol.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    return ml_discrepancy(s.values, implied_covariance(lambda, phi, theta));
  };

  optimize::Options opts;
  opts.grad_tol = 1e-6;
  opts.max_iter = 2000;
  opts.f_tol = 1e-14;
  Vector lower = Vector::Constant(lay.size(), -std::numeric_limits<double>::infinity());
  lower.tail(p).setConstant(kUniquenessFloor);
  opts.lower = lower;
  auto res = optimize::minimize_bfgs(objective, x0, opts);
  if (!std::isfinite(res.value)) throw ConvergenceError("CFA start values give a non-positive-definite model");

  // Newton polish on the interior parameters.
  for (int step = 0; step < 20; ++step) {
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < lay.size(); ++i) {
      if (!(i >= k_theta && res.x(i) <= kUniquenessFloor)) active.push_back(i);
    }
    const Vector g = optimize::numerical_gradient(objective, res.x);
    const Matrix h = optimize::numerical_hessian(objective, res.x);
    const auto na = static_cast<Eigen::Index>(active.size());
    Matrix ha(na, na);
    Vector ga(na);
    for (Eigen::Index a = 0; a < na; ++a) {
      ga(a) = g(active[static_cast<std::size_t>(a)]);
      for (Eigen::Index b = 0; b < na; ++b) ha(a, b) = h(active[static_cast<std::size_t>(a)], active[static_cast<std::size_t>(b)]);
    }
    Eigen::LLT<Matrix> hc(ha);
    if (hc.info() != Eigen::Success) break;
    const Vector delta = hc.solve(ga);
    Vector trial = res.x;
    for (Eigen::Index a = 0; a < na; ++a) trial(active[static_cast<std::size_t>(a)]) -= delta(a);
    trial = trial.cwiseMax(lower);
    const double f_trial = objective(trial);
    if (!(f_trial <= res.value)) break;
    res.x = trial;
    res.value = f_trial;
    if (delta.lpNorm<Eigen::Infinity>() < 1e-12) break;
  }
  {
    Vector g = optimize::numerical_gradient(objective, res.x);
    for (Eigen::Index i = k_theta; i < lay.size(); ++i) {
      if (res.x(i) <= kUniquenessFloor && g(i) > 0.0) g(i) = 0.0;
    }
    res.grad_norm = g.lpNorm<Eigen::Infinity>();
    res.converged = res.grad_norm < kGradTol;
  }

  // Orient every factor so its free loadings sum to a nonnegative value.
  Vector x = res.x;
  {
    std::vector<double> flip(static_cast<std::size_t>(m), 1.0);
    Eigen::Index q = 0;
    Vector col_sum = Vector::Zero(m);
    for (const auto& [i, j] : lay.loadings) col_sum(j) += x(q++);
    for (Eigen::Index j = 0; j < m; ++j) flip[static_cast<std::size_t>(j)] = col_sum(j) < 0.0 ? -1.0 : 1.0;
    q = 0;
    for (const auto& [i, j] : lay.loadings) {
      x(q) *= flip[static_cast<std::size_t>(j)];
      ++q;
    }
    for (const auto& [a, b] : lay.correlations) {
      x(q) *= flip[static_cast<std::size_t>(a)] * flip[static_cast<std::size_t>(b)];
      ++q;
    }
  }

  CFAFit fit;
  fit.labels = spec.labels;
  Vector theta;
  unpack(lay, x, fit.estimates, fit.phi, theta);
  fit.uniquenesses = theta;
  fit.fml = std::max(0.0, res.value);
  fit.chi2 = (n - 1.0) * fit.fml;
  fit.df = static_cast<int>(p * (p + 1) / 2) - static_cast<int>(lay.size());
  fit.grad_norm = res.grad_norm;
  fit.iterations = res.iterations;
  fit.converged = res.converged;
  fit.heywood = (theta.array() <= kUniquenessFloor * (1.0 + 1e-9)).any();

  const Matrix sigma = implied_covariance(fit.estimates, fit.phi, theta);
  const Vector sd = sigma.diagonal().cwiseSqrt();
  fit.loadings = sd.cwiseInverse().asDiagonal() * fit.estimates;
  fit.r_squared = (Vector::Ones(p) - theta.cwiseQuotient(sigma.diagonal())).cwiseMax(0.0).cwiseMin(1.0);

  fit.standard_errors = Matrix::Zero(p, m);
  fit.z = Matrix::Zero(p, m);
  fit.p_values = Matrix::Ones(p, m);
  // Uniquenesses held at the floor are treated as fixed for the information matrix.
  std::vector<Eigen::Index> interior;
  for (Eigen::Index i = 0; i < lay.size(); ++i) {
    if (!(i >= k_theta && x(i) <= kUniquenessFloor * (1.0 + 1e-9))) interior.push_back(i);
  }
  const auto ni = static_cast<Eigen::Index>(interior.size());
  const auto sub_objective = [&](const Vector& y) {
    Vector full = x;
    for (Eigen::Index a = 0; a < ni; ++a) full(interior[static_cast<std::size_t>(a)]) = y(a);
    return objective(full);
  };
  Vector y0(ni);
  for (Eigen::Index a = 0; a < ni; ++a) y0(a) = x(interior[static_cast<std::size_t>(a)]);
  const Matrix hess = optimize::numerical_hessian(sub_objective, y0);
  Eigen::LDLT<Matrix> hess_ldlt(hess);
  const bool invertible = hess_ldlt.info() == Eigen::Success && hess_ldlt.isPositive() &&
                          (hess_ldlt.vectorD().array() > 0.0).all();
  Matrix cov;
  if (invertible) cov = (2.0 / (n - 1.0)) * hess_ldlt.solve(Matrix::Identity(ni, ni));
  for (std::size_t q = 0; q < lay.loadings.size(); ++q) {
    const auto [i, j] = lay.loadings[q];
    const auto pos = std::find(interior.begin(), interior.end(), static_cast<Eigen::Index>(q)) - interior.begin();
    const double var = invertible ? cov(pos, pos) : std::numeric_limits<double>::quiet_NaN();
    const double se = var > 0.0 ? std::sqrt(var) : std::numeric_limits<double>::quiet_NaN();
    fit.standard_errors(i, j) = se;
    fit.z(i, j) = fit.estimates(i, j) / se;
    fit.p_values(i, j) = std::erfc(std::abs(fit.z(i, j)) / std::sqrt(2.0));
  }
  return fit;
}

}  // namespace hirschfa::cfa
