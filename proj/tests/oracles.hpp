#pragma once

// Brute-force reference implementations used by the unit and acceptance
// tests. They follow the textbook definitions directly and share no code
// with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Counts = std::vector<std::int64_t>;

inline Counts sorted_desc(Counts c) {
  std::sort(c.begin(), c.end(), std::greater<>());
  return c;
}

// Number of papers with at least `t` citations.
inline std::int64_t papers_with_at_least(const Counts& c, std::int64_t t) {
  return std::count_if(c.begin(), c.end(), [t](std::int64_t x) { return x >= t; });
}

inline std::int64_t h(const Counts& raw) {
  std::int64_t best = 0;
  for (std::int64_t cand = 0; cand <= static_cast<std::int64_t>(raw.size()); ++cand) {
    if (papers_with_at_least(raw, cand) >= cand) best = cand;
  }
  return best;
}

inline std::int64_t h2(const Counts& raw) {
  std::int64_t best = 0;
  for (std::int64_t k = 0; k <= static_cast<std::int64_t>(raw.size()); ++k) {
    if (papers_with_at_least(raw, k * k) >= k) best = k;
  }
  return best;
}

inline std::int64_t top_sum(const Counts& desc, std::int64_t k) {
  std::int64_t s = 0;
  for (std::int64_t i = 0; i < k && i < static_cast<std::int64_t>(desc.size()); ++i) s += desc[static_cast<std::size_t>(i)];
  return s;
}

// Cumulative-sum definition.
inline std::int64_t g(const Counts& raw, bool capped) {
  const auto c = sorted_desc(raw);
  const std::int64_t total = std::accumulate(c.begin(), c.end(), std::int64_t{0});
  std::int64_t limit = capped ? static_cast<std::int64_t>(c.size()) : static_cast<std::int64_t>(std::sqrt(static_cast<double>(total))) + 2;
  std::int64_t best = 0;
  for (std::int64_t cand = 0; cand <= limit; ++cand) {
    if (top_sum(c, cand) >= cand * cand) best = cand;
  }
  return best;
}

// Average definition (padded): the top g papers, zero-padded, average >= g.
inline std::int64_t g_by_average(const Counts& raw) {
  const auto c = sorted_desc(raw);
  std::int64_t best = 0;
  for (std::int64_t cand = 1; cand <= 1000; ++cand) {
    const double avg = static_cast<double>(top_sum(c, cand)) / static_cast<double>(cand);
    if (avg >= static_cast<double>(cand)) best = cand;
  }
  return best;
}

inline std::vector<double> core(const Counts& raw) {
  const auto c = sorted_desc(raw);
  const auto hh = h(raw);
  return {c.begin(), c.begin() + hh};
}

inline double a(const Counts& raw) {
  const auto k = core(raw);
  return std::accumulate(k.begin(), k.end(), 0.0) / static_cast<double>(k.size());
}

inline double m(const Counts& raw) {
  auto k = core(raw);
  std::sort(k.begin(), k.end());
  const auto n = k.size();
  return n % 2 ? k[n / 2] : 0.5 * (k[n / 2 - 1] + k[n / 2]);
}

inline double r(const Counts& raw) {
  const auto k = core(raw);
  return std::sqrt(std::accumulate(k.begin(), k.end(), 0.0));
}

inline double hw(const Counts& raw) {
  const auto c = sorted_desc(raw);
  const double hh = static_cast<double>(h(raw));
  std::size_t r0 = 0;
  for (std::size_t i = 1; i <= c.size(); ++i) {
    const double rw = static_cast<double>(top_sum(c, static_cast<std::int64_t>(i))) / hh;
    if (rw <= static_cast<double>(c[i - 1])) r0 = i;
  }
  return std::sqrt(static_cast<double>(top_sum(c, static_cast<std::int64_t>(r0))));
}

// Bisection root of f on [lo, hi] where f(lo) >= 0 > f(hi).
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

// Piecewise-linear rank-frequency function, c(x) for x >= 1; zero beyond N+1.
inline double rank_frequency(const Counts& desc, double x) {
  const auto at = [&](std::int64_t k) -> double {
    return k >= 1 && k <= static_cast<std::int64_t>(desc.size()) ? static_cast<double>(desc[static_cast<std::size_t>(k - 1)]) : 0.0;
  };
  const auto k = static_cast<std::int64_t>(std::floor(x));
  const double t = x - static_cast<double>(k);
  return (1.0 - t) * at(k) + t * at(k + 1);
}

// Largest crossing x >= 1 of the interpolated function with `target`.
inline double crossing(const Counts& raw, const std::function<double(double)>& target) {
  const auto c = sorted_desc(raw);
  const auto f = [&](double x) { return rank_frequency(c, x) - target(x); };
  double hi = static_cast<double>(c.size()) + 1.0;
  // scan for the last sign change at unit resolution
  for (double x = hi; x >= 1.0; x -= 1.0) {
    if (f(x) >= 0.0) {
      if (x == hi) return hi;
      return bisect(f, x, x + 1.0);
    }
  }
  return 0.0;
}

inline double h_tilde(const Counts& raw) {
  return crossing(raw, [](double x) { return x; });
}

inline double h2_tilde(const Counts& raw) {
  return crossing(raw, [](double x) { return x * x; });
}

// s(x) = linear interpolation of the padded cumulative sum; root of s(x) = x^2.
inline double g_tilde(const Counts& raw) {
  const auto c = sorted_desc(raw);
  const auto s = [&](double x) {
    const auto k = static_cast<std::int64_t>(std::floor(x));
    const double t = x - static_cast<double>(k);
    return (1.0 - t) * static_cast<double>(top_sum(c, k)) + t * static_cast<double>(top_sum(c, k + 1));
  };
  const double gg = static_cast<double>(g(raw, false));
  if (gg == 0.0) return 0.0;
  return bisect([&](double x) { return s(x) - x * x; }, gg, gg + 1.0);
}

// ---- distributions --------------------------------------------------------

// Student t density integrated by composite Simpson's rule from 0.
inline double student_cdf(double x, double df) {
  const double logc = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) - 0.5 * std::log(df * M_PI);
  const auto pdf = [&](double t) { return std::exp(logc - 0.5 * (df + 1.0) * std::log1p(t * t / df)); };
  const int n = 20000;
  const double a = 0.0;
  const double b = std::abs(x);
  const double hstep = (b - a) / n;
  double sum = pdf(a) + pdf(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * pdf(a + i * hstep);
  const double half = sum * hstep / 3.0;
  return x >= 0.0 ? 0.5 + half : 0.5 - half;
}

// sup |F_n - F| evaluated on both sides of every sample point.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    // empirical CDF just below and at xs[i], accounting for ties
    std::size_t below = i;
    while (below > 0 && xs[below - 1] == xs[i]) --below;
    std::size_t at = i + 1;
    while (at < xs.size() && xs[at] == xs[i]) ++at;
    d = std::max({d, std::abs(f - static_cast<double>(below) / n), std::abs(static_cast<double>(at) / n - f)});
  }
  return d;
}

// Series form of the Kolmogorov survival function, summed to 100 terms.
inline double kolmogorov_q_series(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) s += (k % 2 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * lambda * lambda);
  return std::clamp(s, 0.0, 1.0);
}

// ---- random records -------------------------------------------------------

inline Counts random_record(std::mt19937_64& rng, int max_n = 50, int max_count = 200) {
  std::uniform_int_distribution<int> len(0, max_n);
  std::uniform_int_distribution<int> shape(0, 2);
  const int n = len(rng);
  Counts c(static_cast<std::size_t>(n));
  const int kind = shape(rng);
  std::uniform_int_distribution<int> flat(0, max_count);
  std::geometric_distribution<int> skew(0.08);
  for (auto& x : c) {
    x = kind == 0 ? flat(rng) : std::min(max_count, skew(rng));
    if (kind == 2) x = std::min<std::int64_t>(max_count, x * x / 10);
  }
  return c;
}

}  // namespace oracle
