#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace frplan {

// Rectangular result table with a deterministic CSV rendering: '#'-prefixed
// metadata lines, one header row of name(unit) cells, comma separators,
// '.' decimal point, %.12g doubles, LF line endings, UTF-8. Identical
// content always serializes to identical bytes.
class ResultTable {
 public:
  struct Column {
    std::string name;
    std::string unit;  // empty = dimensionless / not annotated
  };
  // Empty string cells render as empty CSV fields (used for values that are
  // undefined at a row, e.g. a per-user average of an empty region).
  using Cell = std::variant<double, std::int64_t, std::string>;

  explicit ResultTable(std::vector<Column> columns);

  // Metadata renders in insertion order as '# key: value' before the header.
  void add_metadata(std::string key, std::string value);
  // Throws NumericalError if a double cell is not finite; throws
  // ConfigError if the row width does not match the column count.
  void add_row(std::vector<Cell> row);

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const {
    return metadata_;
  }

  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::pair<std::string, std::string>> metadata_;
  std::vector<std::vector<Cell>> rows_;
};

// Formats a double exactly as table cells do (%.12g); exposed so printed
// summaries match emitted CSV values digit for digit.
std::string format_numeric(double value);

// Library version string embedded in table metadata.
const char* version_string();

// FNV-1a 64-bit hash rendered as 16 hex digits; used to fingerprint the
// resolved configuration in table metadata.
std::string fingerprint_hex(const std::string& text);

}  // namespace frplan
