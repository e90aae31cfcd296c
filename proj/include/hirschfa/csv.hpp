#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hirschfa::csv {

/// Splits one comma-separated line. Fields are trimmed of surrounding
/// whitespace; a trailing '\r' is dropped; double-quoted fields may contain
/// commas. Blank lines yield no fields.
std::vector<std::string> split_line(std::string_view line);

/// Whole-field numeric parses; nullopt on trailing garbage or empty input.
std::optional<double> parse_double(std::string_view field);
std::optional<std::int64_t> parse_int(std::string_view field);

}  // namespace hirschfa::csv
