#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "flexhedge/model.hpp"

namespace flexhedge::scenario {

/// SplitMix64 (Steele, Lea and Flood, 2014). Fully specified so that a seed
/// yields the same draws on every platform and in every language:
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
/// uniform01() maps the top 53 bits to the open interval (0, 1) as
/// ((next() >> 11) + 0.5) * 2^-53.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform01();
  /// lo + (hi - lo) * uniform01()
  double uniform(double lo, double hi);

 private:
  std::uint64_t state_;
};

enum class LineCase { Infinite, Finite };

/// "Infinite" is the uncongested case: every line carries the
/// base limit, which the preset loads never reach. "Finite" lowers line 2-3.
struct LineLimitCase {
  LineCase kind = LineCase::Infinite;
  double finite_limit_mw = 0.6;

  static LineLimitCase infinite() { return {}; }
  static LineLimitCase finite(double mw = 0.6) { return {LineCase::Finite, mw}; }
  std::string label() const { return kind == LineCase::Infinite ? "infinite" : "finite"; }
};

struct LoadBounds {
  double p_min_mw = 0.0;
  double p_max_mw = 0.0;
};

struct ScenarioSpec {
  std::vector<double> wholesale;  // 24 hourly import costs, EUR/MWh
  double dist_scale = 0.30;
  std::uint64_t seed = 1;
  std::vector<LoadBounds> load_bounds;  // 24 hours, load at bus 3
  double trans_capacity_mw = 2.0;       // bus 1 import
  double dist_capacity_mw = 0.7;        // bus 2 distributed generation
  LineLimitCase line_case;
  double base_limit_mw = 1.0;
};

struct Scenario {
  Network net;
  std::vector<HourlyMarketData> hours;
};

/// Built-in 24-hour day-ahead price profile (EUR/MWh).
std::vector<double> default_wholesale_series();
/// Built-in load band at the price-requesting bus.
std::vector<LoadBounds> default_load_bounds();

/// Triangle 1-2-3 with 0.1 p.u. lines, bus 1 slack, bus 3 price constrained.
Network paper_3bus_network(LineLimitCase line_case, double base_limit_mw = 1.0);
/// The `paper-3bus` preset with the built-in series.
ScenarioSpec paper_3bus_spec(LineLimitCase line_case, std::uint64_t seed);

std::vector<std::string> validate_spec(const ScenarioSpec& spec);

/// Per hour l, in this draw order:
///   a_dist_l ~ U((1 - s) * min(wholesale), (1 - s) * wholesale_l)
///   b_load_l ~ U(a_dist_l, wholesale_l)
/// Constant terms are zero. Throws InvalidInput for an invalid spec.
Scenario generate_scenario(const ScenarioSpec& spec);

/// Hourly prices from CSV with header `hour,price_eur_mwh` and 24 data rows,
/// returned in hour order. Throws ParseError with row numbers.
std::vector<double> parse_price_csv(std::istream& is);
std::vector<double> load_price_csv(const std::filesystem::path& path);

}  // namespace flexhedge::scenario
