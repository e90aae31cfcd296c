#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hirschfa/efa.hpp"
#include "hirschfa/indices.hpp"
#include "hirschfa/stats.hpp"
#include "hirschfa/table.hpp"

namespace hirschfa::report {

/// The seven h-type indicators in table presentation order.
inline const std::vector<std::string> kCoreIndicators = {"h", "m", "g", "h2", "A", "R", "hw"};

/// "7", "7+NS", "7+NC", "7+NSC" or a comma-separated list of indicator names.
std::vector<std::string> variable_set(std::string_view spec);

// ---- embedded reference dataset -------------------------------------------

/// 26 scientists x 10 indicators (columns g h2 h A m R hw N S C).
const IndicatorTable& fixture();

/// FNV-1a (64 bit) of the canonical CSV rendering.
std::uint64_t table_checksum(const IndicatorTable& table);
inline constexpr std::uint64_t kFixtureChecksum = 0x8a8c371612fb28cdULL;

struct DescriptiveExpectation {
  std::string table_id;
  stats::Transform transform;
  // Columns follow kCoreIndicators.
  std::vector<double> mean, median, sd, d_normal, p_normal, d_student, p_student;
};

struct LoadingExpectation {
  std::string table_id;
  std::string variables;  // variable_set() spec
  stats::Transform transform;
  efa::Rotation rotation;
  std::vector<std::vector<double>> loadings;  // rows follow variable_set(variables)
  std::vector<double> ss;                      // empty when not compared
};

struct KmoExpectation {
  std::string table_id;
  std::string variables;
  stats::Transform transform;
  double kmo;
};

struct CommunalityExpectation {
  std::string table_id;
  std::string variables;
  stats::Transform transform;
  std::vector<double> values;
};

struct VarianceExpectation {
  stats::Transform transform;
  double total_percent;
  std::vector<double> per_factor_percent;  // empty when not reported
};

const std::vector<DescriptiveExpectation>& descriptive_expectations();
const std::vector<LoadingExpectation>& loading_expectations();
const std::vector<KmoExpectation>& kmo_expectations();
const std::vector<CommunalityExpectation>& communality_expectations();
const std::vector<VarianceExpectation>& variance_expectations();

// ---- verification ----------------------------------------------------------

enum class Comparison {
  within,  // |computed - expected| <= tolerance
  below,   // computed < expected
  above,   // computed >= expected
};

struct Check {
  int criterion = 0;
  std::string table_id;
  std::string cell_id;
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::within;
  bool binding = true;
  bool pass = false;
};

struct VerifyReport {
  std::vector<Check> checks;
  bool pass = false;
  int binding_checks = 0;
  int binding_failures = 0;
  int advisory_failures = 0;

  /// Checks of one acceptance criterion.
  std::vector<Check> for_criterion(int criterion) const;
};

struct VerifyOptions {
  /// Replaces every `within` tolerance.
  std::optional<double> tolerance;
  /// Runs against this table instead of the embedded fixture.
  std::optional<IndicatorTable> table;
};

VerifyReport verify(const VerifyOptions& options = {});

// ---- ingestion -------------------------------------------------------------

enum class CitationFormat { long_format, wide_format };

/// long: header `scientist,citations`, one publication per line.
/// wide: `scientist,c1,c2,...` with variable-length rows (header optional).
/// Records keep first-appearance order. Throws ValidationError with the line
/// number for malformed lines and for duplicate wide-format labels.
std::vector<indices::CitationRecord> parse_citations(std::istream& in, CitationFormat format);

/// Indicator table (columns g h2 h A m R hw N S C) for the given records.
IndicatorTable indicator_table(const std::vector<indices::CitationRecord>& records,
                               indices::GIndexConvention conv = indices::GIndexConvention::padded);

// ---- rendering -------------------------------------------------------------

/// Half-even rounding at `digits` decimals (ties decided on x * 10^digits).
double round_half_even(double x, int digits);

/// Fixed notation after half-even rounding.
std::string format_fixed(double x, int digits);

}  // namespace hirschfa::report
