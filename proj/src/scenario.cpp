#include "flexhedge/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "flexhedge/csv.hpp"
#include "flexhedge/errors.hpp"

namespace flexhedge::scenario {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform01() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double SplitMix64::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

std::vector<double> default_wholesale_series() {
  // Day-ahead shape: night trough, morning ramp crossing 70 at hour 9,
  // midday dip and an evening peak.
  return {52.1, 49.8, 47.5, 46.9, 48.2, 53.6, 61.4, 68.3, 72.5, 74.1, 71.8, 69.2,
          67.5, 66.9, 68.8, 71.6, 75.2, 76.9, 78.4, 74.3, 70.6, 66.2, 60.8, 55.4};
}

std::vector<LoadBounds> default_load_bounds() {
  const double p_min[kHoursPerDay] = {0.90, 0.88, 0.86, 0.85, 0.87, 0.92, 0.98, 1.02,
                                      1.05, 1.06, 1.07, 1.08, 1.09, 1.15, 1.18, 1.22,
                                      1.28, 1.32, 1.35, 1.30, 1.24, 1.16, 1.04, 0.95};
  std::vector<LoadBounds> out;
  for (double lo : p_min) out.push_back({lo, lo + 0.05});
  return out;
}

Network paper_3bus_network(LineLimitCase line_case, double base_limit_mw) {
  Network net;
  net.buses = {{1, true, false}, {2, false, false}, {3, false, true}};
  const double limit23 = line_case.kind == LineCase::Finite ? line_case.finite_limit_mw : base_limit_mw;
  net.lines = {{1, 2, 0.1, base_limit_mw}, {1, 3, 0.1, base_limit_mw}, {2, 3, 0.1, limit23}};
  return net;
}

ScenarioSpec paper_3bus_spec(LineLimitCase line_case, std::uint64_t seed) {
  ScenarioSpec spec;
  spec.wholesale = default_wholesale_series();
  spec.seed = seed;
  spec.load_bounds = default_load_bounds();
  spec.line_case = line_case;
  return spec;
}

std::vector<std::string> validate_spec(const ScenarioSpec& spec) {
  std::vector<std::string> out;
  if (!(spec.dist_scale > 0.0 && spec.dist_scale < 1.0)) out.emplace_back("dist_scale must lie in (0, 1)");
  if (spec.wholesale.size() != kHoursPerDay) {
    out.push_back("wholesale series needs 24 values, got " + std::to_string(spec.wholesale.size()));
  }
  for (std::size_t i = 0; i < spec.wholesale.size(); ++i) {
    if (!(spec.wholesale[i] >= 0.0) || !std::isfinite(spec.wholesale[i])) {
      out.push_back("wholesale price at hour " + std::to_string(i + 1) + " must be finite and >= 0");
    }
  }
  if (spec.load_bounds.size() != kHoursPerDay) {
    out.push_back("load bounds need 24 entries, got " + std::to_string(spec.load_bounds.size()));
  }
  for (std::size_t i = 0; i < spec.load_bounds.size(); ++i) {
    const auto& b = spec.load_bounds[i];
    if (!(b.p_min_mw >= 0.0 && b.p_min_mw <= b.p_max_mw && std::isfinite(b.p_max_mw))) {
      out.push_back("load bounds at hour " + std::to_string(i + 1) + " must satisfy 0 <= p_min <= p_max");
    }
  }
  if (!(spec.trans_capacity_mw >= 0.0)) out.emplace_back("trans_capacity_mw must be >= 0");
  if (!(spec.dist_capacity_mw >= 0.0)) out.emplace_back("dist_capacity_mw must be >= 0");
  if (!(spec.base_limit_mw > 0.0)) out.emplace_back("base_limit_mw must be > 0");
  if (spec.line_case.kind == LineCase::Finite && !(spec.line_case.finite_limit_mw > 0.0)) {
    out.emplace_back("finite line limit must be > 0");
  }
  return out;
}

Scenario generate_scenario(const ScenarioSpec& spec) {
  if (const auto problems = validate_spec(spec); !problems.empty()) {
    throw InvalidInput("scenario spec: " + problems.front());
  }
  Scenario sc;
  sc.net = paper_3bus_network(spec.line_case, spec.base_limit_mw);

  const double keep = 1.0 - spec.dist_scale;
  const double floor_price = keep * *std::min_element(spec.wholesale.begin(), spec.wholesale.end());
  SplitMix64 rng(spec.seed);
  for (int h = 1; h <= kHoursPerDay; ++h) {
    const double a_trans = spec.wholesale[static_cast<std::size_t>(h - 1)];
    const double a_dist = rng.uniform(floor_price, keep * a_trans);
    const double b_load = rng.uniform(a_dist, a_trans);
    const LoadBounds& lb = spec.load_bounds[static_cast<std::size_t>(h - 1)];

    HourlyMarketData hour;
    hour.hour = h;
    hour.offers = {{1, a_trans, 0.0, spec.trans_capacity_mw}, {2, a_dist, 0.0, spec.dist_capacity_mw}};
    hour.utilities = {{3, b_load, 0.0, lb.p_min_mw, lb.p_max_mw}};
    sc.hours.push_back(std::move(hour));
  }
  return sc;
}

std::vector<double> parse_price_csv(std::istream& is) {
  const csv::Table t = csv::read(is);
  if (t.header.size() != 2 || t.header[0] != "hour" || t.header[1] != "price_eur_mwh") {
    throw ParseError("price csv: header must be 'hour,price_eur_mwh'");
  }
  std::vector<double> prices(kHoursPerDay, 0.0);
  std::set<long> seen;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string where = "price csv row " + std::to_string(i + 1) + " (line " +
                              std::to_string(t.line_numbers[i]) + ")";
    const long hour = csv::parse_int(t.rows[i][0], where);
    if (hour < 1 || hour > kHoursPerDay) throw ParseError(where + ": hour " + std::to_string(hour) + " outside 1..24");
    if (!seen.insert(hour).second) throw ParseError(where + ": hour " + std::to_string(hour) + " is duplicated");
    const double price = csv::parse_double(t.rows[i][1], where);
    if (std::isnan(price) || std::isinf(price)) throw ParseError(where + ": price must be a finite number");
    if (price < 0.0) throw ParseError(where + ": negative price");
    prices[static_cast<std::size_t>(hour - 1)] = price;
  }
  if (t.rows.size() != kHoursPerDay) {
    throw ParseError("price csv: expected 24 data rows, found " + std::to_string(t.rows.size()));
  }
  return prices;
}

std::vector<double> load_price_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open price file " + path.string());
  return parse_price_csv(in);
}

}  // namespace flexhedge::scenario
