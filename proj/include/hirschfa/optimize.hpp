#pragma once

#include <functional>
#include <optional>

#include <Eigen/Dense>

namespace hirschfa::optimize {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct Options {
  double grad_tol = 1e-8;  // on the projected gradient, infinity norm
  int max_iter = 2000;
  /// Stops (without declaring convergence) after 5 consecutive iterations
  /// whose relative decrease is below this; 0 disables.
  double f_tol = 0.0;
  /// Optional elementwise lower bounds; iterates are projected onto them.
  std::optional<Eigen::VectorXd> lower;
};

struct Result {
  Eigen::VectorXd x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Central differences with step 1e-6 * (1 + |x_i|).
Eigen::VectorXd numerical_gradient(const Objective& f, const Eigen::VectorXd& x);

/// Central second differences of `f`.
Eigen::MatrixXd numerical_hessian(const Objective& f, const Eigen::VectorXd& x);

/// BFGS with numerical gradients and Armijo backtracking. The objective may
/// return +inf (or NaN) for infeasible points; the line search backs off.
Result minimize_bfgs(const Objective& f, Eigen::VectorXd x0, const Options& opts = {});

}  // namespace hirschfa::optimize
