#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "hirschfa/efa.hpp"

namespace hirschfa::efa {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Linear interpolation between order statistics (R type 7).
double percentile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

}  // namespace

Resampler seeded_resampler(std::uint64_t seed) {
  return [seed](int b, std::size_t n) {
    std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(b)));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> rows(n);
    for (auto& r : rows) r = pick(rng);
    return rows;
  };
}

BootstrapResult bootstrap_efa(const IndicatorTable& table, std::span<const std::string> variables,
                              stats::Transform transform, const ExtractionSettings& settings,
                              const RotationSpec& rotation, int B, std::uint64_t seed,
                              const Resampler& resampler) {
  if (B < 2) throw ValidationError(fmt::format("bootstrap needs B >= 2, got {}", B));
  const Matrix data = table.select(variables);
  const std::vector<std::string> labels(variables.begin(), variables.end());
  const auto n = static_cast<std::size_t>(data.rows());

  BootstrapResult out;
  out.B = B;
  out.seed = seed;
  out.reference = efa_on_data(data, labels, transform, settings, rotation).rotated;
  const Resampler draw = resampler ? resampler : seeded_resampler(seed);

  const Eigen::Index p = out.reference.variables();
  const Eigen::Index m = out.reference.factors();
  std::vector<Matrix> samples;
  samples.reserve(static_cast<std::size_t>(B));
  for (int b = 0; b < B; ++b) {
    const auto rows = draw(b, n);
    if (rows.size() != n) throw ValidationError("resampler returned the wrong number of rows");
    Matrix resample(static_cast<Eigen::Index>(n), data.cols());
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i] >= n) throw ValidationError("resampler returned an out-of-range row");
      resample.row(static_cast<Eigen::Index>(i)) = data.row(static_cast<Eigen::Index>(rows[i]));
    }
    try {
      const auto fit = efa_on_data(resample, labels, transform, settings, rotation);
      samples.push_back(align_loadings(fit.rotated, out.reference).aligned.values);
      ++out.converged;
    } catch (const std::exception&) {
      ++out.non_converged;
    }
  }
  if (out.converged < 2) {
    throw ConvergenceError(fmt::format("only {} of {} bootstrap resamples converged", out.converged, B));
  }

  auto& s = out.summary;
  s.mean = Matrix::Zero(p, m);
  s.sd = Matrix::Zero(p, m);
  s.lower = Matrix::Zero(p, m);
  s.upper = Matrix::Zero(p, m);
  std::vector<double> cell(samples.size());
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < samples.size(); ++k) {
        cell[k] = samples[k](i, j);
        sum += cell[k];
      }
      const double mean = sum / static_cast<double>(cell.size());
      double ss = 0.0;
      for (double x : cell) ss += (x - mean) * (x - mean);
      s.mean(i, j) = mean;
      s.sd(i, j) = std::sqrt(ss / static_cast<double>(cell.size() - 1));
      s.lower(i, j) = percentile(cell, 0.025);
      s.upper(i, j) = percentile(cell, 0.975);
    }
  }
  return out;
}

}  // namespace hirschfa::efa
