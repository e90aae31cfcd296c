#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hirschfa::stats {

enum class Transform {
  identity,     // x
  log,          // ln(x)
  log_shifted,  // ln(x + 1)
  sqrt,         // sqrt(x)
};

/// CLI / report names: raw, ln, ln1p, sqrt.
std::string_view transform_name(Transform t);
Transform parse_transform(std::string_view name);

struct Descriptives {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;  // n - 1 denominator
};

enum class Family { normal, student };

struct DistSpec {
  Family family = Family::normal;
  double location = 0.0;
  double scale = 1.0;
  double df = 0.0;  // student only
};

struct KSResult {
  double D = 0.0;
  double p = 1.0;
};

/// Element-wise transform; throws ValidationError naming the first value
/// outside the transform's domain.
std::vector<double> apply_transform(std::span<const double> values, Transform t);

/// Throws InsufficientDataError for n < 2.
Descriptives describe(std::span<const double> values);

/// Fits a reference distribution to the sample.
///
/// normal: location = mean, scale = sample sd.
/// student: without `df`, maximum-likelihood estimates of (df, location,
/// scale) for the location-scale t family. With `df` given, location = mean
/// and scale = sample sd at that fixed df.
///
/// Throws InsufficientDataError for n < 2 or a constant sample.
DistSpec fit_distspec(std::span<const double> values, Family family,
                      std::optional<double> df = std::nullopt);

double normal_cdf(double z);

/// CDF of the standard Student t with `df` degrees of freedom, via the
/// regularized incomplete beta function.
double student_cdf(double x, double df);

/// CDF of a fitted reference. Throws ValidationError on scale <= 0 or a
/// non-positive Student df.
double reference_cdf(const DistSpec& ref, double x);

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

/// One-sample two-sided KS test against a fully specified reference. The
/// p-value is Q(sqrt(n) D) with no small-sample or estimated-parameter
/// correction, clamped to (0, 1].
KSResult ks_test(std::span<const double> values, const DistSpec& ref);

}  // namespace hirschfa::stats
