#include "hirschfa/indices.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "hirschfa/errors.hpp"

namespace hirschfa::indices {

namespace {

std::int64_t core_sum(const CitationRecord& rec, std::size_t k) {
  k = std::min(k, rec.size());
  return std::accumulate(rec.counts.begin(), rec.counts.begin() + static_cast<std::ptrdiff_t>(k),
                         std::int64_t{0});
}

std::size_t require_core(const CitationRecord& rec, const char* what) {
  const auto h = h_index(rec);
  if (h == 0) {
    throw UndefinedCoreError(std::string(what) + " undefined for record '" + rec.label +
                             "': h-core is empty");
  }
  return static_cast<std::size_t>(h);
}

}  // namespace

CitationRecord normalize_record(std::string label, std::span<const std::int64_t> raw_counts) {
  for (std::size_t i = 0; i < raw_counts.size(); ++i) {
    if (raw_counts[i] < 0) {
      throw ValidationError("record '" + label + "': negative citation count " +
                            std::to_string(raw_counts[i]) + " at position " + std::to_string(i + 1));
    }
  }
  CitationRecord rec{std::move(label), {raw_counts.begin(), raw_counts.end()}};
  std::stable_sort(rec.counts.begin(), rec.counts.end(), std::greater<>());
  return rec;
}

std::int64_t h_index(const CitationRecord& rec) {
  std::int64_t h = 0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const auto rank = static_cast<std::int64_t>(i + 1);
    if (rec.counts[i] >= rank) {
      h = rank;
    } else {
      break;
    }
  }
  return h;
}

std::int64_t h2_index(const CitationRecord& rec) {
  std::int64_t h2 = 0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const auto rank = static_cast<std::int64_t>(i + 1);
    if (rec.counts[i] >= rank * rank) {
      h2 = rank;
    } else {
      break;
    }
  }
  return h2;
}

std::int64_t g_index(const CitationRecord& rec, GIndexConvention conv) {
  // The cumulative sum stays flat past N while g^2 keeps growing, so the
  // condition fails permanently once it fails beyond the last paper.
  std::int64_t g = 0;
  std::int64_t cumulative = 0;
  for (std::int64_t k = 1;; ++k) {
    if (static_cast<std::size_t>(k) <= rec.size()) {
      cumulative += rec.counts[static_cast<std::size_t>(k - 1)];
    } else if (conv == GIndexConvention::capped) {
      break;
    }
    if (cumulative >= k * k) {
      g = k;
    } else if (static_cast<std::size_t>(k) >= rec.size()) {
      break;
    }
  }
  return g;
}

double a_index(const CitationRecord& rec) {
  const auto h = require_core(rec, "A-index");
  return static_cast<double>(core_sum(rec, h)) / static_cast<double>(h);
}

double m_index(const CitationRecord& rec) {
  const auto h = require_core(rec, "m-index");
  // counts are sorted, so the core is already ordered
  if (h % 2 == 1) {
    return static_cast<double>(rec.counts[h / 2]);
  }
  return 0.5 * static_cast<double>(rec.counts[h / 2 - 1] + rec.counts[h / 2]);
}

double r_index(const CitationRecord& rec) {
  const auto h = static_cast<std::size_t>(h_index(rec));
  return std::sqrt(static_cast<double>(core_sum(rec, h)));
}

double hw_index(const CitationRecord& rec) {
  const auto h = static_cast<double>(require_core(rec, "h_w-index"));
  // r_w(i) = S_i / h grows while c_i falls, so the condition holds on a prefix.
  std::int64_t cumulative = 0;
  std::int64_t s_at_r0 = 0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    cumulative += rec.counts[i];
    if (static_cast<double>(cumulative) / h <= static_cast<double>(rec.counts[i])) {
      s_at_r0 = cumulative;
    } else {
      break;
    }
  }
  return std::sqrt(static_cast<double>(s_at_r0));
}

Totals totals(const CitationRecord& rec) {
  if (rec.size() == 0) {
    throw UndefinedCoreError("record '" + rec.label + "' has no papers; C = S/N is undefined");
  }
  Totals t;
  t.N = static_cast<std::int64_t>(rec.size());
  t.S = core_sum(rec, rec.size());
  t.C = static_cast<double>(t.S) / static_cast<double>(t.N);
  return t;
}

IndicatorSet indicator_set(const CitationRecord& rec, GIndexConvention conv) {
  IndicatorSet s;
  s.h = h_index(rec);
  s.h2 = h2_index(rec);
  s.g = g_index(rec, conv);
  s.R = r_index(rec);
  s.N = static_cast<std::int64_t>(rec.size());
  s.S = core_sum(rec, rec.size());
  s.C = s.N > 0 ? static_cast<double>(s.S) / static_cast<double>(s.N) : 0.0;
  s.empty_core = s.h == 0;
  if (!s.empty_core) {
    s.A = a_index(rec);
    s.m = m_index(rec);
    s.hw = hw_index(rec);
  }
  return s;
}

InterpolatedIndicatorSet interpolated_set(const CitationRecord& rec) {
  const auto h = require_core(rec, "interpolated indices");
  const auto c = [&](std::size_t rank) { return static_cast<double>(rec.at_rank(rank)); };

  InterpolatedIndicatorSet out;

  // Segment (h, c_h)-(h+1, c_{h+1}) against y = x.
  {
    const double hd = static_cast<double>(h);
    const double drop = c(h) - c(h + 1);
    out.h_tilde = (c(h) + hd * drop) / (1.0 + drop);
  }

  // Segment (k, c_k)-(k+1, c_{k+1}) against y = x^2:
  //   x^2 + d x - (d k + c_k) = 0 with d = c_k - c_{k+1}; the positive root
  //   lies in [k, k+1).
  {
    const auto k = static_cast<std::size_t>(h2_index(rec));
    const double kd = static_cast<double>(k);
    const double d = c(k) - c(k + 1);
    out.h2_tilde = 0.5 * (-d + std::sqrt(d * d + 4.0 * (d * kd + c(k))));
  }

  // Cumulative sum linear on [g, g+1] with slope c_{g+1}:
  //   x^2 - c x - (S_g - g c) = 0.
  {
    const auto g = static_cast<std::size_t>(g_index(rec, GIndexConvention::padded));
    const double gd = static_cast<double>(g);
    const double slope = c(g + 1);
    const double s_g = static_cast<double>(core_sum(rec, g));
    out.g_tilde = 0.5 * (slope + std::sqrt(slope * slope + 4.0 * (s_g - gd * slope)));
  }
  return out;
}

}  // namespace hirschfa::indices
