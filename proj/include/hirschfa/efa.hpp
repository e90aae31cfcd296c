#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hirschfa/errors.hpp"
#include "hirschfa/linalg.hpp"
#include "hirschfa/stats.hpp"
#include "hirschfa/table.hpp"

namespace hirschfa::efa {

using linalg::Matrix;
using linalg::Vector;

struct CorrelationMatrix {
  Matrix values;
  std::vector<std::string> labels;

  Eigen::Index dim() const { return values.rows(); }
};

struct ExtractionSettings {
  int n_factors = 2;
  double tol = 1e-6;
  int max_iter = 500;
};

enum class Rotation { none, varimax, promax };

std::string_view rotation_name(Rotation r);
Rotation parse_rotation(std::string_view name);

/// p x m loadings. Output of the library is column-ordered by descending sum
/// of squares with nonnegative column sums.
struct LoadingMatrix {
  Matrix values;
  Rotation rotation = Rotation::none;
  std::vector<std::string> labels;

  Eigen::Index variables() const { return values.rows(); }
  Eigen::Index factors() const { return values.cols(); }
};

struct Extraction {
  LoadingMatrix unrotated;
  Vector communalities;
  int iterations = 0;
  bool smc_fallback = false;
  /// Heywood clamp events, one message per affected variable.
  std::vector<std::string> warnings;
};

/// Thrown by uls_extract when the iteration cap is hit.
class ExtractionNotConverged : public ConvergenceError {
 public:
  ExtractionNotConverged(const std::string& what, Extraction last)
      : ConvergenceError(what), last_iterate(std::move(last)) {}
  Extraction last_iterate;
};

struct VarimaxResult {
  LoadingMatrix rotated;
  Matrix rotation;  // m x m orthogonal; rotated = unrotated * rotation
  /// Varimax criterion (on the normalized loadings when Kaiser-normalized)
  /// before the first sweep and after each sweep.
  std::vector<double> criterion_trace;
  int sweeps = 0;
};

struct PromaxResult {
  LoadingMatrix pattern;
  Matrix structure;
  Matrix phi;  // factor correlations
};

struct EFAResult {
  CorrelationMatrix correlations;
  LoadingMatrix unrotated;
  LoadingMatrix rotated;  // pattern matrix when oblique
  std::optional<Matrix> structure;
  std::optional<Matrix> phi;
  Vector communalities;
  /// Column SS of the rotated loadings (of the structure matrix when oblique).
  Vector ss_loadings;
  /// ss_loadings / p.
  Vector variance_explained;
  int iterations = 0;
  std::vector<std::string> warnings;
};

struct BartlettResult {
  double chi2 = 0.0;
  int df = 0;
  double p = 1.0;
};

struct AdequacyResult {
  double kmo = 0.0;
  double bartlett_chi2 = 0.0;
  int bartlett_df = 0;
  double bartlett_p = 1.0;
};

struct Categorization {
  double threshold = 0.6;
  std::vector<std::string> labels;
  /// memberships[i] holds the 0-based factor indices where |loading| > threshold.
  std::vector<std::vector<int>> memberships;

  /// Variables whose membership includes `factor`.
  std::vector<std::string> members_of(int factor) const;
};

struct Alignment {
  LoadingMatrix aligned;
  std::vector<int> permutation;  // aligned column j = input column permutation[j]
  std::vector<int> signs;        // +1 / -1 applied after permuting
  double congruence = 0.0;       // sum_j |Tucker congruence(aligned_j, reference_j)|
};

struct RotationSpec {
  Rotation kind = Rotation::varimax;
  int kappa = 3;
  bool kaiser_normalize = true;
};

/// Pearson correlations of the columns of `data` (rows = observations).
/// Throws InsufficientDataError for fewer than 3 rows or a constant column.
CorrelationMatrix correlation_matrix(const Matrix& data, std::vector<std::string> labels);

/// Kaiser-Meyer-Olkin sampling adequacy. Throws NumericalError for a
/// singular matrix or when every off-diagonal correlation is zero.
double kmo(const CorrelationMatrix& r);

/// Bartlett's sphericity test. Throws ValidationError for n <= p and
/// NumericalError for a non-positive determinant.
BartlettResult bartlett(const CorrelationMatrix& r, int n);

AdequacyResult adequacy(const CorrelationMatrix& r, int n);

/// Number of correlation eigenvalues above 1 (Kaiser's rule).
int kaiser_factor_count(const CorrelationMatrix& r);

/// Unweighted least squares by iterated principal-axis factoring from
/// squared multiple correlations.
Extraction uls_extract(const CorrelationMatrix& r, const ExtractionSettings& s = {});

/// Pairwise (Kaiser) varimax; throws ValidationError on an already rotated input.
VarimaxResult varimax(const LoadingMatrix& l, bool kaiser_normalize = true);

/// Hendrickson-White promax on top of a varimax solution.
PromaxResult promax(const LoadingMatrix& l_varimax, int kappa = 3);

/// Sorts columns by descending SS and flips signs to nonnegative column sums.
/// Returns the column permutation applied (new j = old perm[j]) and signs.
std::pair<std::vector<int>, std::vector<int>> normalize_columns(Matrix& loadings);

Categorization categorize(const LoadingMatrix& l, double threshold = 0.6);

/// Column permutation and sign flips of `l` maximizing the summed absolute
/// congruence with `reference` (exhaustive; at most 8 factors).
Alignment align_loadings(const LoadingMatrix& l, const LoadingMatrix& reference);

double tucker_congruence(const Vector& a, const Vector& b);

/// transform -> correlate -> extract -> rotate.
EFAResult efa_pipeline(const IndicatorTable& table, std::span<const std::string> variables,
                       stats::Transform transform, const ExtractionSettings& settings = {},
                       const RotationSpec& rotation = {});

/// Same pipeline over an already selected data matrix.
EFAResult efa_on_data(const Matrix& data, std::vector<std::string> labels,
                      stats::Transform transform, const ExtractionSettings& settings,
                      const RotationSpec& rotation);

struct LoadingSummary {
  Matrix mean;
  Matrix sd;
  Matrix lower;  // 2.5th percentile
  Matrix upper;  // 97.5th percentile
};

struct BootstrapResult {
  int B = 0;
  std::uint64_t seed = 0;
  LoadingMatrix reference;  // full-sample rotated loadings
  LoadingSummary summary;   // over converged, aligned resamples
  int converged = 0;
  int non_converged = 0;
};

/// Row indices for resample `b` of a dataset with `n` rows.
using Resampler = std::function<std::vector<std::size_t>(int b, std::size_t n)>;

/// Default resampler: n draws with replacement from an mt19937_64 seeded
/// by splitmix64(seed + b), so every resample is independent of evaluation
/// order.
Resampler seeded_resampler(std::uint64_t seed);

BootstrapResult bootstrap_efa(const IndicatorTable& table, std::span<const std::string> variables,
                              stats::Transform transform, const ExtractionSettings& settings,
                              const RotationSpec& rotation, int B, std::uint64_t seed,
                              const Resampler& resampler = {});

}  // namespace hirschfa::efa
