#include "partialreg/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "partialreg/errors.hpp"

namespace partialreg {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(std::string_view line, std::size_t row) {
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
    } else if (c == '"' && trim(current).empty()) {
      current.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? current : std::string(trim(current)));
      current.clear();
      was_quoted = false;
    } else {
      current.push_back(c);
    }
  }
  if (quoted) throw ParseError(row, fields.size() + 1, "unterminated quoted field");
  fields.push_back(was_quoted ? current : std::string(trim(current)));
  return fields;
}

double parse_number(std::string_view cell, std::size_t row, std::size_t col,
                    const std::string& name) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || end != cell.data() + cell.size()) {
    throw ParseError(row, col,
                     "non-numeric cell '" + std::string(cell) + "' in column '" + name + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(row, col,
                     "non-finite value '" + std::string(cell) + "' in column '" + name + "'");
  }
  return value;
}

std::string quote_if_needed(const std::string& name) {
  if (name.find_first_of(",\"") == std::string::npos && trim(name) == name) return name;
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

Dataset parse_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (line.ends_with('\r')) line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ValidationError("CSV input is empty");

  std::vector<std::string> names = split_fields(lines[0], 1);
  std::set<std::string_view> seen;
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (names[c].empty()) throw ParseError(1, c + 1, "empty column header");
    if (!seen.insert(names[c]).second) {
      throw ParseError(1, c + 1, "duplicate column header '" + names[c] + "'");
    }
  }

  const std::size_t width = names.size();
  std::vector<std::vector<double>> columns(width);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::size_t row = r + 1;
    if (trim(lines[r]).empty()) throw ParseError(row, 0, "empty row");
    const auto fields = split_fields(lines[r], row);
    if (fields.size() != width) {
      throw ParseError(row, 0,
                       "expected " + std::to_string(width) + " fields, got " +
                           std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < width; ++c) {
      columns[c].push_back(parse_number(fields[c], row, c + 1, names[c]));
    }
  }
  if (lines.size() - 1 < 2) {
    throw ValidationError("CSV needs at least 2 data rows, got " +
                          std::to_string(lines.size() - 1));
  }
  return Dataset::from_columns(std::move(names), columns);
}

Dataset ingest_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

void write_csv(const Dataset& data, std::ostream& out) {
  const auto& names = data.column_names();
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c > 0) out << ',';
    out << quote_if_needed(names[c]);
  }
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t c = 0; c < names.size(); ++c) {
      if (c > 0) out << ',';
      const auto res = std::to_chars(buf, buf + sizeof buf, data.column(c)[i]);
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

}  // namespace partialreg
