#include "flexhedge/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>

#include "flexhedge/errors.hpp"

namespace flexhedge::csv {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double round_cents(double eur) {
  const double scaled = std::abs(eur) * 100.0;
  // The 1e-9 absorbs representation error such as 2.275 -> 2.27499999...
  const double rounded = std::floor(scaled + 0.5 + 1e-9) / 100.0;
  return std::copysign(rounded, eur);
}

std::string format_money(double eur) {
  char buf[64];
  const double r = round_cents(eur);
  std::snprintf(buf, sizeof buf, "%.2f", r == 0.0 ? 0.0 : r);
  return buf;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ParseError("csv: missing column '" + name + "'");
}

Table read(std::istream& is) {
  Table t;
  std::string line;
  int number = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_line(line);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw ParseError("csv line " + std::to_string(number) + ": expected " +
                       std::to_string(t.header.size()) + " fields, found " + std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(number);
  }
  if (!have_header) throw ParseError("csv: empty input");
  return t;
}

double parse_double(const std::string& text, const std::string& context) {
  if (text == "inf" || text == "+inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  if (text == "nan") return NAN;
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  if (first < last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || first == last) {
    throw ParseError(context + ": cannot parse number '" + text + "'");
  }
  return v;
}

long parse_int(const std::string& text, const std::string& context) {
  long v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || first == last) {
    throw ParseError(context + ": cannot parse integer '" + text + "'");
  }
  return v;
}

}  // namespace flexhedge::csv
