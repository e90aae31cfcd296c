#include "hirschfa/table.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "hirschfa/csv.hpp"
#include "hirschfa/errors.hpp"

namespace hirschfa {

std::string canonical_indicator(std::string_view name) {
  for (auto known : kIndicatorNames) {
    if (name == known) return std::string(known);
  }
  if (name == "h(2)" || name == "h_2") return "h2";
  if (name == "h_w") return "hw";
  throw ValidationError(fmt::format("unknown indicator column '{}'", name));
}

IndicatorTable::IndicatorTable(std::vector<std::string> row_labels, std::vector<std::string> columns,
                               Eigen::MatrixXd values)
    : row_labels_(std::move(row_labels)), columns_(std::move(columns)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.rows()) != row_labels_.size() ||
      static_cast<std::size_t>(values_.cols()) != columns_.size()) {
    throw ValidationError(fmt::format("table shape {}x{} does not match {} labels and {} columns",
                                      values_.rows(), values_.cols(), row_labels_.size(),
                                      columns_.size()));
  }
  std::set<std::string_view> seen;
  for (const auto& l : row_labels_) {
    if (!seen.insert(l).second) throw ValidationError(fmt::format("duplicate row label '{}'", l));
  }
  seen.clear();
  for (const auto& c : columns_) {
    if (!seen.insert(c).second) throw ValidationError(fmt::format("duplicate column '{}'", c));
  }
}

bool IndicatorTable::has_column(std::string_view name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

std::size_t IndicatorTable::column_index(std::string_view name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw ValidationError(fmt::format("table has no column '{}'", name));
  return static_cast<std::size_t>(it - columns_.begin());
}

std::vector<double> IndicatorTable::column(std::string_view name) const {
  const auto j = static_cast<Eigen::Index>(column_index(name));
  return {values_.col(j).data(), values_.col(j).data() + values_.rows()};
}

Eigen::MatrixXd IndicatorTable::select(std::span<const std::string> names) const {
  Eigen::MatrixXd out(values_.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t k = 0; k < names.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = values_.col(static_cast<Eigen::Index>(column_index(names[k])));
  }
  return out;
}

double& IndicatorTable::at(std::size_t row, std::string_view col) {
  return values_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(column_index(col)));
}

double IndicatorTable::at(std::size_t row, std::string_view col) const {
  return values_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(column_index(col)));
}

bool IndicatorTable::operator==(const IndicatorTable& other) const {
  return row_labels_ == other.row_labels_ && columns_ == other.columns_ &&
         values_.rows() == other.values_.rows() && values_.cols() == other.values_.cols() &&
         values_ == other.values_;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const IndicatorTable& table) {
  std::string out = "scientist";
  for (const auto& c : table.columns()) out += "," + c;
  out += "\n";
  for (std::size_t i = 0; i < table.rows(); ++i) {
    out += table.row_labels()[i];
    for (std::size_t j = 0; j < table.cols(); ++j) {
      out += "," + format_number(table.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out += "\n";
  }
  return out;
}

IndicatorTable parse_indicator_table(std::istream& in) {
  std::vector<std::string> columns;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = csv::split_line(line);
    if (fields.empty()) continue;
    if (!have_header) {
      for (std::size_t k = 1; k < fields.size(); ++k) {
        try {
          columns.push_back(canonical_indicator(fields[k]));
        } catch (const ValidationError& e) {
          throw ValidationError(fmt::format("line {}: {}", line_no, e.what()));
        }
      }
      if (columns.empty()) throw ValidationError(fmt::format("line {}: header has no indicator columns", line_no));
      have_header = true;
      continue;
    }
    if (fields.size() != columns.size() + 1) {
      throw ValidationError(fmt::format("line {}: expected {} fields, got {}", line_no,
                                        columns.size() + 1, fields.size()));
    }
    std::vector<double> row;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const auto value = csv::parse_double(fields[k]);
      if (!value) {
        throw ValidationError(fmt::format("line {}: non-numeric value '{}' in column '{}'", line_no,
                                          fields[k], columns[k - 1]));
      }
      row.push_back(*value);
    }
    labels.push_back(fields[0]);
    rows.push_back(std::move(row));
  }
  if (!have_header) throw ValidationError("indicator table is empty (no header row)");

  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return IndicatorTable(std::move(labels), std::move(columns), std::move(values));
}

IndicatorTable parse_indicator_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_indicator_table(in);
}

}  // namespace hirschfa
