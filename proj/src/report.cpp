#include "hirschfa/report.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <set>

#include <fmt/format.h>

#include "hirschfa/csv.hpp"
#include "hirschfa/errors.hpp"

namespace hirschfa::report {

std::vector<std::string> variable_set(std::string_view spec) {
  std::vector<std::string> vars = kCoreIndicators;
  if (spec == "7") return vars;
  if (spec == "7+NS" || spec == "7+NC" || spec == "7+NSC") {
    for (const char c : spec.substr(2)) vars.emplace_back(1, c);
    return vars;
  }
  vars.clear();
  std::set<std::string> seen;
  for (const auto& field : csv::split_line(spec)) {
    auto name = canonical_indicator(field);
    if (!seen.insert(name).second) throw ValidationError(fmt::format("variable '{}' listed twice", name));
    vars.push_back(std::move(name));
  }
  if (vars.size() < 3) {
    throw ValidationError(fmt::format("variable set '{}' needs at least 3 indicators", spec));
  }
  return vars;
}

std::vector<indices::CitationRecord> parse_citations(std::istream& in, CitationFormat format) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::int64_t>> counts;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = csv::split_line(line);
    if (fields.empty()) continue;
    const bool header = first;
    first = false;

    if (format == CitationFormat::long_format) {
      if (header) {
        if (fields.size() != 2 || fields[0] != "scientist" || fields[1] != "citations") {
          throw ValidationError(fmt::format("line {}: expected header 'scientist,citations'", line_no));
        }
        continue;
      }
      if (fields.size() != 2 || fields[0].empty()) {
        throw ValidationError(fmt::format("line {}: expected 'scientist,citations', got {} field(s)", line_no,
                                          fields.size()));
      }
      const auto value = csv::parse_int(fields[1]);
      if (!value || *value < 0) {
        throw ValidationError(fmt::format("line {}: invalid citation count '{}'", line_no, fields[1]));
      }
      auto [it, inserted] = counts.try_emplace(fields[0]);
      if (inserted) order.push_back(fields[0]);
      it->second.push_back(*value);
      continue;
    }

    if (header && fields[0] == "scientist") continue;
    if (fields[0].empty()) throw ValidationError(fmt::format("line {}: missing scientist label", line_no));
    if (counts.contains(fields[0])) {
      throw ValidationError(fmt::format("line {}: duplicate scientist '{}'", line_no, fields[0]));
    }
    std::vector<std::int64_t> row;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      if (fields[k].empty() && k + 1 == fields.size()) break;
      const auto value = csv::parse_int(fields[k]);
      if (!value || *value < 0) {
        throw ValidationError(fmt::format("line {}: invalid citation count '{}'", line_no, fields[k]));
      }
      row.push_back(*value);
    }
    order.push_back(fields[0]);
    counts.emplace(fields[0], std::move(row));
  }

  std::vector<indices::CitationRecord> records;
  records.reserve(order.size());
  for (const auto& label : order) records.push_back(indices::normalize_record(label, counts.at(label)));
  return records;
}

IndicatorTable indicator_table(const std::vector<indices::CitationRecord>& records,
                               indices::GIndexConvention conv) {
  if (records.empty()) throw InsufficientDataError("no citation records");
  std::vector<std::string> labels;
  Eigen::MatrixXd values(static_cast<Eigen::Index>(records.size()), 10);
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto s = indices::indicator_set(records[r], conv);
    const auto t = indices::totals(records[r]);
    values.row(static_cast<Eigen::Index>(r)) << static_cast<double>(s.g), static_cast<double>(s.h2),
        static_cast<double>(s.h), s.A, s.m, s.R, s.hw, static_cast<double>(t.N), static_cast<double>(t.S), t.C;
    labels.push_back(records[r].label);
  }
  return IndicatorTable(std::move(labels), {std::begin(kIndicatorNames), std::end(kIndicatorNames)},
                        std::move(values));
}

double round_half_even(double x, int digits) {
  if (!std::isfinite(x)) return x;
  const double scale = std::pow(10.0, digits);
  const double scaled = x * scale;
  const double lower = std::floor(scaled);
  const double frac = scaled - lower;
  double r = lower;
  if (frac > 0.5 || (frac == 0.5 && std::fmod(lower, 2.0) != 0.0)) r = lower + 1.0;
  return r / scale;
}

std::string format_fixed(double x, int digits) {
  if (std::isnan(x)) return "NaN";
  const double r = round_half_even(x, digits);
  return fmt::format("{:.{}f}", r == 0.0 ? 0.0 : r, digits);
}

}  // namespace hirschfa::report
