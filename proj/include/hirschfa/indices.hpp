#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hirschfa::indices {

/// One scientist's citation counts in rank order (c_1 >= c_2 >= ... >= c_N).
/// Construct through normalize_record() so the ordering invariant holds.
struct CitationRecord {
  std::string label;
  std::vector<std::int64_t> counts;

  std::size_t size() const { return counts.size(); }
  /// 1-based rank access; ranks beyond N read as zero-cited papers.
  std::int64_t at_rank(std::size_t rank) const {
    return rank >= 1 && rank <= counts.size() ? counts[rank - 1] : 0;
  }
};

enum class GIndexConvention {
  padded,  // fictitious zero-cited papers allow g > N
  capped,  // g <= N
};

struct IndicatorSet {
  std::int64_t h = 0;
  std::int64_t h2 = 0;
  std::int64_t g = 0;
  double A = 0.0;
  double m = 0.0;
  double R = 0.0;
  double hw = 0.0;
  std::int64_t N = 0;
  std::int64_t S = 0;
  double C = 0.0;
  /// Set when h = 0; A, m and hw are then reported as 0.
  bool empty_core = false;
};

struct InterpolatedIndicatorSet {
  double h_tilde = 0.0;
  double g_tilde = 0.0;
  double h2_tilde = 0.0;
};

struct Totals {
  std::int64_t N = 0;
  std::int64_t S = 0;
  double C = 0.0;
};

/// Sorts counts into rank order. Throws ValidationError naming the first
/// negative entry.
CitationRecord normalize_record(std::string label, std::span<const std::int64_t> raw_counts);

std::int64_t h_index(const CitationRecord& rec);
std::int64_t h2_index(const CitationRecord& rec);
std::int64_t g_index(const CitationRecord& rec, GIndexConvention conv = GIndexConvention::padded);

// The h-core statistics below throw UndefinedCoreError when h = 0.
double a_index(const CitationRecord& rec);
double m_index(const CitationRecord& rec);
double hw_index(const CitationRecord& rec);

/// sqrt of the h-core citation sum; 0 for an empty core.
double r_index(const CitationRecord& rec);

/// Throws UndefinedCoreError for N = 0 (C undefined).
Totals totals(const CitationRecord& rec);

IndicatorSet indicator_set(const CitationRecord& rec,
                           GIndexConvention conv = GIndexConvention::padded);

/// Non-integer h, g and h(2) from the piecewise-linear rank-frequency
/// function. g~ always uses the padded convention.
InterpolatedIndicatorSet interpolated_set(const CitationRecord& rec);

}  // namespace hirschfa::indices
