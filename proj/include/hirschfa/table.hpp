#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace hirschfa {

/// Indicator vocabulary, in the canonical column order of the embedded
/// fixture.
inline constexpr std::string_view kIndicatorNames[] = {"g", "h2", "h", "A", "m",
                                                       "R", "hw", "N", "S", "C"};

/// Maps accepted spellings ("h(2)", "h_w", ...) to the canonical name.
/// Throws ValidationError for anything outside the vocabulary.
std::string canonical_indicator(std::string_view name);

/// Rows are scientists, columns named indicators.
class IndicatorTable {
 public:
  IndicatorTable() = default;
  /// Throws ValidationError on shape mismatch or duplicate labels/columns.
  IndicatorTable(std::vector<std::string> row_labels, std::vector<std::string> columns,
                 Eigen::MatrixXd values);

  std::size_t rows() const { return row_labels_.size(); }
  std::size_t cols() const { return columns_.size(); }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::MatrixXd& mutable_values() { return values_; }

  bool has_column(std::string_view name) const;
  /// Throws ValidationError for an unknown column.
  std::size_t column_index(std::string_view name) const;
  std::vector<double> column(std::string_view name) const;
  /// Sub-matrix with the given columns in the given order.
  Eigen::MatrixXd select(std::span<const std::string> names) const;

  double& at(std::size_t row, std::string_view col);
  double at(std::size_t row, std::string_view col) const;

  bool operator==(const IndicatorTable& other) const;

 private:
  std::vector<std::string> row_labels_;
  std::vector<std::string> columns_;
  Eigen::MatrixXd values_;
};

/// Canonical CSV: header `scientist,<columns...>`, numbers in shortest
/// round-trip form.
std::string to_csv(const IndicatorTable& table);

/// Parses an indicator CSV. The first column is the row label; header names
/// must come from the indicator vocabulary. Throws ValidationError with the
/// line number for unknown columns, duplicate labels or non-numeric cells.
IndicatorTable parse_indicator_table(std::istream& in);
IndicatorTable parse_indicator_table(std::string_view text);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

}  // namespace hirschfa
