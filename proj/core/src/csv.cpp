#include "csv.hpp"

#include <charconv>
#include <fstream>

#include "crowdsense/error.hpp"

namespace crowdsense::io::detail {

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no,
                                        const std::filesystem::path& path) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      if (!trim(current).empty()) parse_fail(path, line_no, "unexpected quote inside a field");
      current.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? current : trim(current));
      current.clear();
      was_quoted = false;
    } else {
      current.push_back(c);
    }
  }
  if (quoted) parse_fail(path, line_no, "unterminated quoted field");
  fields.push_back(was_quoted ? current : trim(current));
  return fields;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  CsvTable table;
  table.path = path;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line, line_no, path);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      parse_fail(path, line_no,
                 "expected " + std::to_string(table.header.size()) + " fields, found " + std::to_string(fields.size()));
    }
    table.rows.push_back({line_no, std::move(fields)});
  }
  return table;
}

bool CsvTable::has_column(std::string_view name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  parse_fail(path, 1, "missing column '" + std::string(name) + "'");
}

const std::string& field(const CsvTable& t, const CsvRow& row, std::size_t col) {
  (void)t;
  return row.fields[col];
}

double parse_double(const CsvTable& t, const CsvRow& row, std::size_t col) {
  const std::string& s = row.fields[col];
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    parse_fail(t.path, row.line, "column '" + t.header[col] + "': '" + s + "' is not a number");
  }
  return v;
}

long long parse_int(const CsvTable& t, const CsvRow& row, std::size_t col) {
  const std::string& s = row.fields[col];
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    parse_fail(t.path, row.line, "column '" + t.header[col] + "': '" + s + "' is not an integer");
  }
  return v;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace crowdsense::io::detail
