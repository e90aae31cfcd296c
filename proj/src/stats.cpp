#include "hirschfa/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>
#include <fmt/format.h>

#include "hirschfa/errors.hpp"
#include "hirschfa/optimize.hpp"

namespace hirschfa::stats {

std::string_view transform_name(Transform t) {
  switch (t) {
    case Transform::identity: return "raw";
    case Transform::log: return "ln";
    case Transform::log_shifted: return "ln1p";
    case Transform::sqrt: return "sqrt";
  }
  return "raw";
}

Transform parse_transform(std::string_view name) {
  if (name == "raw" || name == "identity") return Transform::identity;
  if (name == "ln" || name == "log") return Transform::log;
  if (name == "ln1p" || name == "log_shifted") return Transform::log_shifted;
  if (name == "sqrt") return Transform::sqrt;
  throw ValidationError(fmt::format("unknown transform '{}' (expected raw|ln|ln1p|sqrt)", name));
}

std::vector<double> apply_transform(std::span<const double> values, Transform t) {
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = values[i];
    const auto domain_error = [&](const char* req) {
      return ValidationError(fmt::format("transform {}: value {} at position {} violates {}",
                                         transform_name(t), x, i + 1, req));
    };
    switch (t) {
      case Transform::identity:
        out.push_back(x);
        break;
      case Transform::log:
        if (!(x > 0.0)) throw domain_error("x > 0");
        out.push_back(std::log(x));
        break;
      case Transform::log_shifted:
        if (!(x > -1.0)) throw domain_error("x > -1");
        out.push_back(std::log1p(x));
        break;
      case Transform::sqrt:
        if (!(x >= 0.0)) throw domain_error("x >= 0");
        out.push_back(std::sqrt(x));
        break;
    }
  }
  return out;
}

Descriptives describe(std::span<const double> values) {
  if (values.size() < 2) {
    throw InsufficientDataError(fmt::format("describe needs n >= 2, got {}", values.size()));
  }
  Descriptives d;
  d.n = values.size();
  const double n = static_cast<double>(d.n);
  d.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : values) ss += (x - d.mean) * (x - d.mean);
  d.sd = std::sqrt(ss / (n - 1.0));

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = d.n / 2;
  d.median = d.n % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return d;
}

namespace {

constexpr double kMaxStudentDf = 1e6;

double student_log_pdf(double x, double df, double loc, double scale) {
  const double z = (x - loc) / scale;
  return std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
         0.5 * std::log(df * std::numbers::pi) - std::log(scale) -
         0.5 * (df + 1.0) * std::log1p(z * z / df);
}

DistSpec fit_student_mle(std::span<const double> values, const Descriptives& d) {
  // Parameters: (ln df, location, ln scale). A handful of df starts guards
  // against the flat likelihood ridge at large df.
  const optimize::Objective nll = [&](const Eigen::VectorXd& th) {
    const double df = std::exp(th(0));
    if (!(df <= kMaxStudentDf)) return std::numeric_limits<double>::infinity();
    const double scale = std::exp(th(2));
    double sum = 0.0;
    for (double x : values) sum -= student_log_pdf(x, df, th(1), scale);
    return sum;
  };
  optimize::Options opts;
  opts.grad_tol = 1e-6;
  opts.max_iter = 500;
  opts.lower = Eigen::Vector3d(std::log(0.05), -std::numeric_limits<double>::infinity(),
                               -std::numeric_limits<double>::infinity());

  optimize::Result best;
  best.value = std::numeric_limits<double>::infinity();
  for (double df0 : {1.0, 2.0, 4.0, 8.0, 30.0}) {
    const double scale0 = df0 > 2.0 ? d.sd * std::sqrt((df0 - 2.0) / df0) : 0.6 * d.sd;
    const Eigen::Vector3d start(std::log(df0), d.median, std::log(scale0));
    auto r = optimize::minimize_bfgs(nll, start, opts);
    if (r.value < best.value) best = std::move(r);
  }
  DistSpec spec;
  spec.family = Family::student;
  spec.df = std::exp(best.x(0));
  spec.location = best.x(1);
  spec.scale = std::exp(best.x(2));
  return spec;
}

}  // namespace

DistSpec fit_distspec(std::span<const double> values, Family family, std::optional<double> df) {
  const auto d = describe(values);
  if (!(d.sd > 0.0)) {
    throw InsufficientDataError("cannot fit a reference distribution to a constant sample");
  }
  if (family == Family::normal) {
    return DistSpec{Family::normal, d.mean, d.sd, 0.0};
  }
  if (df) {
    if (!(*df > 0.0)) throw ValidationError(fmt::format("Student df must be positive, got {}", *df));
    return DistSpec{Family::student, d.mean, d.sd, *df};
  }
  return fit_student_mle(values, d);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double student_cdf(double x, double df) {
  if (!(df > 0.0)) throw ValidationError(fmt::format("Student df must be positive, got {}", df));
  if (x == 0.0) return 0.5;
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * boost::math::ibeta(0.5 * df, 0.5, df / (df + x * x));
  return x < 0.0 ? tail : 1.0 - tail;
}

double reference_cdf(const DistSpec& ref, double x) {
  if (!(ref.scale > 0.0)) throw ValidationError("reference scale must be positive");
  const double z = (x - ref.location) / ref.scale;
  switch (ref.family) {
    case Family::normal: return normal_cdf(z);
    case Family::student: return student_cdf(z, ref.df);
  }
  return normal_cdf(z);
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double q = 0.0;
  if (lambda < 1.0) {
    // Alternating series converges slowly here; use the Jacobi theta dual
    // 1 - sqrt(2 pi)/lambda * sum exp(-(2k-1)^2 pi^2 / (8 lambda^2)).
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * pi2 / (8.0 * lambda * lambda));
      sum += term;
      if (term < 1e-12) break;
    }
    q = 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
  } else {
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      q += sign * term;
      sign = -sign;
      if (term < 1e-12) break;
    }
    q *= 2.0;
  }
  return std::clamp(q, std::numeric_limits<double>::min(), 1.0);
}

KSResult ks_test(std::span<const double> values, const DistSpec& ref) {
  if (values.empty()) throw InsufficientDataError("ks_test needs at least one value");
  if (ref.family == Family::student && !(ref.df > 0.0)) {
    throw ValidationError("Student reference needs df > 0");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d_max = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = reference_cdf(ref, sorted[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d_max = std::max({d_max, above, below});
  }
  return KSResult{d_max, kolmogorov_q(std::sqrt(n) * d_max)};
}

}  // namespace hirschfa::stats
