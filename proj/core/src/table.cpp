#include "frplan/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "frplan/errors.hpp"

namespace frplan {

#ifndef FRPLAN_VERSION
#define FRPLAN_VERSION "0.0.0"
#endif

const char* version_string() { return FRPLAN_VERSION; }

std::string format_numeric(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string fingerprint_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ResultTable::ResultTable(std::vector<Column> columns)
    : columns_(std::move(columns)) {
  if (columns_.empty()) throw ConfigError("result table needs at least one column");
}

void ResultTable::add_metadata(std::string key, std::string value) {
  metadata_.emplace_back(std::move(key), std::move(value));
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw ConfigError("row width does not match the column count");
  for (const Cell& cell : row) {
    if (const double* v = std::get_if<double>(&cell); v && !std::isfinite(*v))
      throw NumericalError("non-finite value in result table");
  }
  rows_.push_back(std::move(row));
}

std::string ResultTable::to_csv() const {
  std::string out;
  for (const auto& [key, value] : metadata_) {
    out += "# ";
    out += key;
    out += ": ";
    out += value;
    out += '\n';
  }
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (c) out += ',';
    out += columns_[c].name;
    if (!columns_[c].unit.empty()) {
      out += '(';
      out += columns_[c].unit;
      out += ')';
    }
  }
  out += '\n';
  for (const std::vector<Cell>& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      if (const double* v = std::get_if<double>(&row[c])) {
        out += format_numeric(*v);
      } else if (const std::int64_t* i = std::get_if<std::int64_t>(&row[c])) {
        out += std::to_string(*i);
      } else {
        out += std::get<std::string>(row[c]);
      }
    }
    out += '\n';
  }
  return out;
}

void ResultTable::write_csv(const std::filesystem::path& path) const {
  std::ofstream fh(path, std::ios::binary);
  if (!fh) throw ConfigError("cannot open output file: " + path.string());
  std::string csv = to_csv();
  fh.write(csv.data(), static_cast<std::streamsize>(csv.size()));
  if (!fh) throw ConfigError("failed writing output file: " + path.string());
}

}  // namespace frplan
