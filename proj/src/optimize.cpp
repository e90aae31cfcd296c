#include "hirschfa/optimize.hpp"

#include <cmath>
#include <limits>

namespace hirschfa::optimize {

namespace {

double step_for(double xi) { return 1e-6 * (1.0 + std::abs(xi)); }

bool finite(double v) { return std::isfinite(v); }

// Zeroes gradient components that point out of the feasible box.
Eigen::VectorXd projected(const Eigen::VectorXd& g, const Eigen::VectorXd& x,
                          const std::optional<Eigen::VectorXd>& lower) {
  Eigen::VectorXd pg = g;
  if (lower) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x(i) <= (*lower)(i) && g(i) > 0.0) pg(i) = 0.0;
    }
  }
  return pg;
}

void project(Eigen::VectorXd& x, const std::optional<Eigen::VectorXd>& lower) {
  if (lower) x = x.cwiseMax(*lower);
}

}  // namespace

Eigen::VectorXd numerical_gradient(const Objective& f, const Eigen::VectorXd& x) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step_for(x(i));
    probe(i) = x(i) + h;
    const double up = f(probe);
    probe(i) = x(i) - h;
    const double down = f(probe);
    probe(i) = x(i);
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd numerical_hessian(const Objective& f, const Eigen::VectorXd& x) {
  // Larger step than the gradient: second differences lose twice the digits.
  const Eigen::Index n = x.size();
  Eigen::MatrixXd hess(n, n);
  Eigen::VectorXd hs(n);
  for (Eigen::Index i = 0; i < n; ++i) hs(i) = 1e-4 * (1.0 + std::abs(x(i)));
  const double f0 = f(x);
  Eigen::VectorXd p = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    p(i) = x(i) + hs(i);
    const double fp = f(p);
    p(i) = x(i) - hs(i);
    const double fm = f(p);
    p(i) = x(i);
    hess(i, i) = (fp - 2.0 * f0 + fm) / (hs(i) * hs(i));
    for (Eigen::Index j = 0; j < i; ++j) {
      p(i) = x(i) + hs(i);
      p(j) = x(j) + hs(j);
      const double fpp = f(p);
      p(j) = x(j) - hs(j);
      const double fpm = f(p);
      p(i) = x(i) - hs(i);
      const double fmm = f(p);
      p(j) = x(j) + hs(j);
      const double fmp = f(p);
      p(i) = x(i);
      p(j) = x(j);
      hess(i, j) = hess(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * hs(i) * hs(j));
    }
  }
  return hess;
}

Result minimize_bfgs(const Objective& f, Eigen::VectorXd x0, const Options& opts) {
  const Eigen::Index n = x0.size();
  Result res;
  project(x0, opts.lower);
  Eigen::VectorXd x = std::move(x0);
  double fx = f(x);
  if (!finite(fx)) {
    res.x = x;
    res.value = fx;
    return res;
  }
  Eigen::VectorXd g = numerical_gradient(f, x);
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);

  int it = 0;
  int stalled = 0;
  for (; it < opts.max_iter; ++it) {
    const Eigen::VectorXd pg = projected(g, x, opts.lower);
    res.grad_norm = pg.lpNorm<Eigen::Infinity>();
    if (res.grad_norm < opts.grad_tol) {
      res.converged = true;
      break;
    }

    // Variables pinned at their bound drop out of the quasi-Newton step.
    Eigen::VectorXd free_mask = Eigen::VectorXd::Ones(n);
    if (opts.lower) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (x(i) <= (*opts.lower)(i) && g(i) > 0.0) free_mask(i) = 0.0;
      }
    }
    Eigen::VectorXd dir = -(free_mask.asDiagonal() * hinv * free_mask.asDiagonal()) * pg;
    double slope = pg.dot(dir);
    if (!(slope < 0.0)) {
      hinv.setIdentity();
      dir = -pg;
      slope = -pg.squaredNorm();
    }

    double step = 1.0;
    Eigen::VectorXd x_new;
    double f_new = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      x_new = x + step * dir;
      project(x_new, opts.lower);
      f_new = f(x_new);
      if (finite(f_new) && f_new <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (hinv.isIdentity()) break;  // no descent possible along -g either
      hinv.setIdentity();
      continue;
    }

    const Eigen::VectorXd g_new = numerical_gradient(f, x_new);
    const Eigen::VectorXd s = free_mask.cwiseProduct(x_new - x);
    const Eigen::VectorXd y = free_mask.cwiseProduct(g_new - g);
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
      hinv = (eye - rho * s * y.transpose()) * hinv * (eye - rho * y * s.transpose()) +
             rho * s * s.transpose();
    }
    stalled = fx - f_new <= opts.f_tol * (1.0 + std::abs(fx)) ? stalled + 1 : 0;
    x = x_new;
    fx = f_new;
    g = g_new;
    if (opts.f_tol > 0.0 && stalled >= 5) {
      ++it;
      break;
    }
  }

  res.x = x;
  res.value = fx;
  res.iterations = it;
  if (!res.converged) {
    res.grad_norm = projected(g, x, opts.lower).lpNorm<Eigen::Infinity>();
    res.converged = res.grad_norm < opts.grad_tol;
  }
  return res;
}

}  // namespace hirschfa::optimize
