#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "hirschfa/cfa.hpp"
#include "hirschfa/report.hpp"

namespace hirschfa::report {

namespace {

using efa::Rotation;
using stats::Transform;

constexpr double kDescriptiveTol = 0.01;
constexpr double kStatisticTol = 0.005;
constexpr double kNormalPTol = 0.02;
constexpr double kStudentPTol = 0.03;
constexpr double kKmoTol = 0.005;
constexpr double kBartlettAlpha = 0.001;
constexpr double kVarimaxTol = 0.03;
constexpr double kPromaxTol = 0.05;
constexpr double kSsTol = 0.05;
constexpr double kVariancePointsTol = 1.0;
constexpr double kCommunalityTol = 0.02;
constexpr double kExpandedCommunalityTol = 0.03;
constexpr double kMeanCommunalityFloor = 0.97;
constexpr double kFixtureTol = 0.05;
constexpr double kCategorizeLow = 0.6;
constexpr double kCategorizeHigh = 0.7;
constexpr double kCfaThreshold = 0.7;
constexpr double kCfaR2h = 0.94;
constexpr double kCfaR2Tol = 0.1;
constexpr double kSignificance = 0.05;

const char* const kFactorNames[] = {"F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8"};

class Builder {
 public:
  Builder(const IndicatorTable& table, const VerifyOptions& opts) : table_(table), opts_(opts) {}

  void add(int criterion, std::string table_id, std::string cell, double expected, double computed,
           double tolerance, Comparison cmp = Comparison::within, bool binding = true) {
    Check c;
    c.criterion = criterion;
    c.table_id = std::move(table_id);
    c.cell_id = std::move(cell);
    c.expected = expected;
    c.computed = computed;
    c.tolerance = (cmp == Comparison::within && tolerance > 0.0 && opts_.tolerance) ? *opts_.tolerance : tolerance;
    c.comparison = cmp;
    c.binding = binding;
    switch (cmp) {
      case Comparison::within: c.pass = std::abs(computed - expected) <= c.tolerance + 1e-12; break;
      case Comparison::below: c.pass = computed < expected; break;
      case Comparison::above: c.pass = computed >= expected; break;
    }
    if (!std::isfinite(computed)) c.pass = false;
    checks_.push_back(std::move(c));
  }

  // Failed pipelines become failing entries rather than aborting the report.
  void fail(int criterion, const std::string& table_id, const std::string& cell, const std::exception& e) {
    add(criterion, table_id, fmt::format("{} ({})", cell, e.what()), 0.0, std::nan(""), 0.0);
  }

  const efa::EFAResult& efa(const std::string& vars, Transform t, Rotation r) {
    const auto key = std::make_tuple(vars, t, r);
    auto it = efa_cache_.find(key);
    if (it == efa_cache_.end()) {
      const auto names = variable_set(vars);
      efa::RotationSpec spec;
      spec.kind = r;
      it = efa_cache_.emplace(key, efa::efa_pipeline(table_, names, t, {}, spec)).first;
    }
    return it->second;
  }

  const IndicatorTable& table() const { return table_; }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  const IndicatorTable& table_;
  const VerifyOptions& opts_;
  std::vector<Check> checks_;
  std::map<std::tuple<std::string, Transform, Rotation>, efa::EFAResult> efa_cache_;
};

efa::LoadingMatrix as_reference(const LoadingExpectation& e, const std::vector<std::string>& labels) {
  efa::LoadingMatrix ref;
  ref.labels = labels;
  ref.values.resize(static_cast<Eigen::Index>(e.loadings.size()), static_cast<Eigen::Index>(e.loadings[0].size()));
  for (std::size_t i = 0; i < e.loadings.size(); ++i) {
    for (std::size_t j = 0; j < e.loadings[i].size(); ++j) {
      ref.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = e.loadings[i][j];
    }
  }
  return ref;
}

void fixture_consistency(Builder& b) {
  const auto& t = b.table();
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const auto& label = t.row_labels()[i];
    b.add(1, "Table A1", fmt::format("{} R vs sqrt(A h)", label), t.at(i, "R"),
          std::sqrt(t.at(i, "A") * t.at(i, "h")), kFixtureTol);
    b.add(1, "Table A1", fmt::format("{} C vs S/N", label), t.at(i, "C"), t.at(i, "S") / t.at(i, "N"), kFixtureTol);
  }
}

void descriptives(Builder& b) {
  for (const auto& e : descriptive_expectations()) {
    const int criterion = e.transform == Transform::identity ? 2 : 3;
    const auto tname = std::string(stats::transform_name(e.transform));
    for (std::size_t k = 0; k < kCoreIndicators.size(); ++k) {
      const auto& var = kCoreIndicators[k];
      const auto cell = [&](std::string_view what) { return fmt::format("{} {} {}", tname, var, what); };
      try {
        const auto raw = b.table().column(var);
        const auto values = stats::apply_transform(raw, e.transform);
        const auto d = stats::describe(values);
        b.add(criterion, e.table_id, cell("mean"), e.mean[k], d.mean, kDescriptiveTol);
        b.add(criterion, e.table_id, cell("median"), e.median[k], d.median, kDescriptiveTol);
        b.add(criterion, e.table_id, cell("sd"), e.sd[k], d.sd, kDescriptiveTol);
        const auto normal = stats::ks_test(values, stats::fit_distspec(values, stats::Family::normal));
        b.add(criterion, e.table_id, cell("D normal"), e.d_normal[k], normal.D, kStatisticTol);
        b.add(criterion, e.table_id, cell("p normal"), e.p_normal[k], normal.p, kNormalPTol);
        const auto student = stats::ks_test(values, stats::fit_distspec(values, stats::Family::student));
        b.add(criterion, e.table_id, cell("D Student"), e.d_student[k], student.D, kStatisticTol);
        b.add(criterion, e.table_id, cell("p Student"), e.p_student[k], student.p, kStudentPTol,
              Comparison::within, false);
      } catch (const std::exception& ex) {
        b.fail(criterion, e.table_id, cell("descriptives"), ex);
      }
    }
  }
}

void adequacy(Builder& b) {
  for (const auto& e : kmo_expectations()) {
    const int criterion = e.variables == "7" ? 4 : 8;
    const auto tname = std::string(stats::transform_name(e.transform));
    const auto cell = fmt::format("{} vars {}", tname, e.variables);
    try {
      const auto& res = b.efa(e.variables, e.transform, Rotation::varimax);
      const auto n = static_cast<int>(b.table().rows());
      const auto a = efa::adequacy(res.correlations, n);
      b.add(criterion, e.table_id, cell + " KMO", e.kmo, a.kmo, kKmoTol);
      b.add(criterion, e.table_id, cell + " Bartlett p", kBartlettAlpha, a.bartlett_p, 0.0, Comparison::below);
    } catch (const std::exception& ex) {
      b.fail(criterion, e.table_id, cell, ex);
    }
  }
}

void loadings(Builder& b) {
  for (const auto& e : loading_expectations()) {
    int criterion = 5;
    double tol = kVarimaxTol;
    if (e.table_id == "Table 4") {
      criterion = 7;
      tol = kPromaxTol;
    } else if (e.table_id == "Table 7") {
      criterion = 8;
      tol = kPromaxTol;
    } else if (e.table_id != "Table 3") {
      criterion = 8;
    }
    const auto tname = std::string(stats::transform_name(e.transform));
    const auto names = variable_set(e.variables);
    try {
      const auto& res = b.efa(e.variables, e.transform, e.rotation);
      const auto ref = as_reference(e, names);
      const auto aligned = efa::align_loadings(res.rotated, ref).aligned.values;
      for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = 0; j < e.loadings[i].size(); ++j) {
          b.add(criterion, e.table_id, fmt::format("{} {} {}", tname, names[i], kFactorNames[j]), e.loadings[i][j],
                aligned(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), tol);
        }
      }
      for (std::size_t j = 0; j < e.ss.size(); ++j) {
        b.add(criterion, e.table_id, fmt::format("{} SS {}", tname, kFactorNames[j]), e.ss[j],
              aligned.col(static_cast<Eigen::Index>(j)).squaredNorm(), kSsTol);
      }
    } catch (const std::exception& ex) {
      b.fail(criterion, e.table_id, fmt::format("{} loadings", tname), ex);
    }
  }
}

void variance(Builder& b) {
  const auto& t3 = loading_expectations();
  for (const auto& e : variance_expectations()) {
    const auto tname = std::string(stats::transform_name(e.transform));
    try {
      const auto& res = b.efa("7", e.transform, Rotation::varimax);
      const auto p = static_cast<double>(res.correlations.dim());
      b.add(5, "Table 3", fmt::format("{} variance explained %", tname), e.total_percent,
            100.0 * res.ss_loadings.sum() / p, kVariancePointsTol);
      if (e.per_factor_percent.empty()) continue;
      for (const auto& le : t3) {
        if (le.table_id != "Table 3" || le.transform != e.transform) continue;
        const auto aligned = efa::align_loadings(res.rotated, as_reference(le, variable_set("7"))).aligned.values;
        for (std::size_t j = 0; j < e.per_factor_percent.size(); ++j) {
          b.add(5, "Table 3", fmt::format("{} variance explained % {}", tname, kFactorNames[j]),
                e.per_factor_percent[j], 100.0 * aligned.col(static_cast<Eigen::Index>(j)).squaredNorm() / p,
                kVariancePointsTol);
        }
      }
    } catch (const std::exception& ex) {
      b.fail(5, "Table 3", fmt::format("{} variance explained", tname), ex);
    }
  }
}

void communalities(Builder& b) {
  for (const auto& e : communality_expectations()) {
    const bool core = e.variables == "7";
    const int criterion = core ? 6 : 8;
    const double tol = core ? kCommunalityTol : kExpandedCommunalityTol;
    const auto tname = std::string(stats::transform_name(e.transform));
    const auto names = variable_set(e.variables);
    try {
      const auto& res = b.efa(e.variables, e.transform, Rotation::varimax);
      for (std::size_t i = 0; i < names.size(); ++i) {
        b.add(criterion, e.table_id, fmt::format("{} {} communality", tname, names[i]), e.values[i],
              res.communalities(static_cast<Eigen::Index>(i)), tol);
      }
      if (core && e.transform == Transform::identity) {
        b.add(criterion, e.table_id, "raw mean communality", kMeanCommunalityFloor, res.communalities.mean(), 0.0,
              Comparison::above);
      }
    } catch (const std::exception& ex) {
      b.fail(criterion, e.table_id, fmt::format("{} communalities", tname), ex);
    }
  }
}

void categorization(Builder& b) {
  const std::vector<std::string> names = variable_set("7");
  const std::map<double, std::vector<std::vector<int>>> expected = {
      // h m g h2 A R hw
      {kCategorizeLow, {{1, 0}, {1, 0}, {1, 1}, {1, 0}, {0, 1}, {1, 1}, {1, 1}}},
      {kCategorizeHigh, {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {0, 1}, {1, 0}, {1, 0}}},
  };
  try {
    const auto& res = b.efa("7", Transform::identity, Rotation::varimax);
    const auto& t3 = loading_expectations().front();
    const auto aligned = efa::align_loadings(res.rotated, as_reference(t3, names)).aligned;
    for (const auto& [threshold, members] : expected) {
      const auto cat = efa::categorize(aligned, threshold);
      for (std::size_t i = 0; i < names.size(); ++i) {
        for (int j = 0; j < 2; ++j) {
          const auto& got = cat.memberships[i];
          const bool in = std::find(got.begin(), got.end(), j) != got.end();
          b.add(9, "Table 3", fmt::format("threshold {} {} on {}", threshold, names[i], kFactorNames[j]),
                members[i][static_cast<std::size_t>(j)], in ? 1.0 : 0.0, 0.0);
        }
      }
    }
  } catch (const std::exception& ex) {
    b.fail(9, "Table 3", "categorization", ex);
  }
}

void cfa_diagnostics(Builder& b) {
  try {
    const auto& res = b.efa("7+NC", Transform::identity, Rotation::varimax);
    const auto spec = cfa::pattern_from_efa(res.rotated, kCfaThreshold, true);
    const auto fit = cfa::cfa_fit(res.correlations, static_cast<int>(b.table().rows()), spec);
    const auto names = variable_set("7+NC");
    const auto h = static_cast<Eigen::Index>(std::find(names.begin(), names.end(), "h") - names.begin());
    const auto nn = static_cast<Eigen::Index>(std::find(names.begin(), names.end(), "N") - names.begin());
    b.add(12, "Table A7", "raw R2 h", kCfaR2h, fit.r_squared(h), kCfaR2Tol, Comparison::within, false);
    double p_n = 1.0;
    for (Eigen::Index j = 0; j < spec.factors(); ++j) {
      if (spec.loadings(nn, j)) p_n = std::min(p_n, fit.p_values(nn, j));
    }
    b.add(12, "Table A7", "raw N loading p (n.s.)", kSignificance, p_n, 0.0, Comparison::above, false);
  } catch (const std::exception& ex) {
    b.add(12, "Table A7", fmt::format("raw CFA ({})", ex.what()), 0.0, std::nan(""), 0.0, Comparison::within,
          false);
  }
}

}  // namespace

std::vector<Check> VerifyReport::for_criterion(int criterion) const {
  std::vector<Check> out;
  for (const auto& c : checks) {
    if (c.criterion == criterion) out.push_back(c);
  }
  return out;
}

VerifyReport verify(const VerifyOptions& options) {
  const IndicatorTable& table = options.table ? *options.table : fixture();
  Builder b(table, options);
  fixture_consistency(b);
  descriptives(b);
  adequacy(b);
  loadings(b);
  variance(b);
  communalities(b);
  categorization(b);
  cfa_diagnostics(b);

  VerifyReport report;
  report.checks = b.take();
  for (const auto& c : report.checks) {
    if (c.binding) {
      ++report.binding_checks;
      if (!c.pass) ++report.binding_failures;
    } else if (!c.pass) {
      ++report.advisory_failures;
    }
  }
  report.pass = report.binding_failures == 0;
  return report;
}

}  // namespace hirschfa::report
