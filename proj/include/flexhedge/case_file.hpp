#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "flexhedge/model.hpp"

namespace flexhedge::casefile {

/// Network, hourly market data and caps in one human-editable text file:
///
///   # comment
///   name = paper-3bus          key = value settings
///   hours = 24                 hours 1..N exist even when empty
///   [buses]                    id slack(0/1) price_constrained(0/1)
///   [lines]                    from to reactance_pu flow_limit_mw|inf
///   [offers]                   hour bus marginal_cost constant_cost capacity_mw|inf
///   [utilities]                hour bus marginal_utility constant_utility p_min_mw p_max_mw
///   [caps]                     bus hour|* cap_eur_mwh
///
/// Fields are whitespace separated. Numbers are written in shortest
/// round-trip form, so write followed by read reproduces the data exactly.
struct CaseData {
  std::map<std::string, std::string> settings;
  Network net;
  std::vector<HourlyMarketData> hours;
  std::vector<PriceCap> caps;

  bool operator==(const CaseData&) const = default;
};

void write_case(std::ostream& os, const CaseData& data);
/// Throws ParseError naming the line on malformed input. Semantic checks are
/// left to validate_network / validate_market_data.
CaseData read_case(std::istream& is);

CaseData load_case(const std::filesystem::path& path);
void save_case(const std::filesystem::path& path, const CaseData& data);

}  // namespace flexhedge::casefile
