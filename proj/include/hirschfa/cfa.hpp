#pragma once

#include <string>
#include <vector>

#include "hirschfa/efa.hpp"

namespace hirschfa::cfa {

using linalg::Matrix;
using linalg::Vector;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Free/fixed layout of a confirmatory model. Factor variances are fixed to 1;
/// fixed loadings and fixed factor correlations are 0.
struct PatternSpec {
  Mask loadings;     // p x m, true = free
  Mask phi_free;     // m x m symmetric, diagonal ignored
  std::vector<std::string> labels;

  Eigen::Index variables() const { return loadings.rows(); }
  Eigen::Index factors() const { return loadings.cols(); }
  /// Free loadings + free factor correlations + p uniquenesses.
  int free_parameters() const;
};

/// Throws ValidationError when a variable has no free loading, a factor has
/// fewer than 2 indicators or fewer than m-1 fixed zeros, or the model has
/// more free parameters than p(p+1)/2 distinct moments.
void check_identified(const PatternSpec& spec);

/// Free loading wherever |L_ij| > threshold; all factor correlations free.
/// A variable with no loading above the threshold is an error unless
/// `assign_max_if_none`, in which case its largest loading is freed.
PatternSpec pattern_from_efa(const efa::LoadingMatrix& l, double threshold,
                             bool assign_max_if_none = false);

struct CFAFit {
  Matrix estimates;        // loadings on the analyzed matrix (p x m; 0 where fixed)
  Matrix loadings;         // standardized
  Matrix standard_errors;  // of `estimates`; 0 where fixed
  Matrix z;
  Matrix p_values;         // two-sided normal; 1 where fixed
  Matrix phi;
  Vector uniquenesses;
  Vector r_squared;
  double fml = 0.0;
  double chi2 = 0.0;       // (n - 1) F_ML
  int df = 0;
  double grad_norm = 0.0;
  int iterations = 0;
  /// Projected numerical gradient of F_ML below 1e-5 at the solution.
  bool converged = false;
  /// A uniqueness reached the 1e-4 floor.
  bool heywood = false;
  std::vector<std::string> labels;
};

/// Sigma = Lambda Phi Lambda' + diag(theta).
Matrix implied_covariance(const Matrix& lambda, const Matrix& phi, const Vector& theta);

/// ML discrepancy ln|Sigma| + tr(S Sigma^-1) - ln|S| - p; +inf when Sigma is
/// not positive definite.
double ml_discrepancy(const Matrix& s, const Matrix& sigma);

/// Maximum-likelihood fit of `spec` to the moment matrix `s` from n
/// observations. Throws ValidationError for n <= p or a shape mismatch and
/// ConvergenceError when the optimizer cannot leave the start.
CFAFit cfa_fit(const efa::CorrelationMatrix& s, int n, const PatternSpec& spec);

}  // namespace hirschfa::cfa
