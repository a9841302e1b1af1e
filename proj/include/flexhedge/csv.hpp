#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace flexhedge::csv {

/// Shortest text that parses back to the same double ("inf"/"-inf"/"nan" for
/// non-finite values).
std::string format_double(double v);

/// Half-up rounding to cents, two decimals ("2.28").
std::string format_money(double eur);
double round_cents(double eur);

/// Quotes a field when it contains a comma, quote or newline.
std::string escape(std::string_view field);

std::vector<std::string> split_line(const std::string& line);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  // source line of each row (1-based)

  /// Column position by name; throws ParseError when missing.
  std::size_t column(const std::string& name) const;
};

/// Reads a header line plus data rows. Blank lines are skipped. Throws
/// ParseError when a row has a different field count than the header.
Table read(std::istream& is);

double parse_double(const std::string& text, const std::string& context);
long parse_int(const std::string& text, const std::string& context);

}  // namespace flexhedge::csv
