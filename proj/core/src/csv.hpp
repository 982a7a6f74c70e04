#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace crowdsense::io::detail {

struct CsvRow {
  std::size_t line = 0;  // 1-based line number in the file
  std::vector<std::string> fields;
};

struct CsvTable {
  std::filesystem::path path;
  std::vector<std::string> header;
  std::vector<CsvRow> rows;

  /// Column position of `name`; ParseError naming the file when absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

/// Reads a comma-separated file with a header row. Fields may be wrapped in
/// double quotes ("" escapes a quote). Blank lines are skipped. An empty
/// file yields an empty table with no header.
CsvTable read_csv(const std::filesystem::path& path);

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no,
                                        const std::filesystem::path& path);

/// Quotes the field when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

double parse_double(const CsvTable& t, const CsvRow& row, std::size_t col);
long long parse_int(const CsvTable& t, const CsvRow& row, std::size_t col);
const std::string& field(const CsvTable& t, const CsvRow& row, std::size_t col);

/// Shortest decimal form that round-trips.
std::string format_double(double v);

}  // namespace crowdsense::io::detail
