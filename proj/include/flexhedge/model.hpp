#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace flexhedge {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr int kHoursPerDay = 24;

/// Dense 1-based bus index.
using BusId = int;

struct Bus {
  BusId id = 0;
  bool is_slack = false;
  bool price_constrained = false;

  bool operator==(const Bus&) const = default;
};

struct Line {
  BusId from_bus = 0;
  BusId to_bus = 0;
  double reactance_pu = 0.0;
  std::optional<double> flow_limit_mw;  // nullopt = unbounded

  double susceptance() const { return 1.0 / reactance_pu; }
  bool connects(BusId a, BusId b) const {
    return (from_bus == a && to_bus == b) || (from_bus == b && to_bus == a);
  }
  bool operator==(const Line&) const = default;
};

struct Network {
  std::vector<Bus> buses;
  std::vector<Line> lines;

  std::size_t bus_count() const { return buses.size(); }
  bool has_bus(BusId id) const;
  const Bus& bus(BusId id) const;
  /// Throws InvalidInput when the network has no slack bus.
  BusId slack_bus() const;
  /// The set K, in ascending id order.
  std::vector<BusId> price_constrained_buses() const;
  /// Index into `lines`, or nullopt when no line joins the pair.
  std::optional<std::size_t> line_between(BusId a, BusId b) const;

  bool operator==(const Network&) const = default;
};

struct GenOffer {
  BusId bus = 0;
  double marginal_cost = 0.0;  // EUR/MWh
  double constant_cost = 0.0;  // EUR/h
  double capacity_mw = kInf;

  bool operator==(const GenOffer&) const = default;
};

struct LoadUtility {
  BusId bus = 0;
  double marginal_utility = 0.0;  // EUR/MWh
  double constant_utility = 0.0;  // EUR/h
  double p_min_mw = 0.0;
  double p_max_mw = 0.0;

  bool operator==(const LoadUtility&) const = default;
};

/// Maximum willingness to pay at a price-constrained bus. Either one value
/// broadcast over the day or one value per hour.
struct PriceCap {
  BusId bus = 0;
  std::vector<double> cap_eur_per_mwh;

  static PriceCap flat(BusId bus, double cap) { return {bus, {cap}}; }
  /// `hour` is 1-based.
  double at(int hour) const;

  bool operator==(const PriceCap&) const = default;
};

struct HourlyMarketData {
  int hour = 1;  // 1..24
  std::vector<GenOffer> offers;
  std::vector<LoadUtility> utilities;

  const GenOffer* offer_at(BusId bus) const;
  const LoadUtility* utility_at(BusId bus) const;

  bool operator==(const HourlyMarketData&) const = default;
};

/// Every violated Network/Bus/Line invariant, one message each. Empty iff valid.
std::vector<std::string> validate_network(const Network& net);

/// Market-data checks against `net` (unknown buses, duplicates, bounds, signs).
std::vector<std::string> validate_market_data(const Network& net, const HourlyMarketData& data);

/// Caps must sit on price-constrained buses and be nonnegative.
std::vector<std::string> validate_caps(const Network& net, const std::vector<PriceCap>& caps);

/// Buses joined to `bus` by a line. Throws InvalidInput for an unknown id.
std::set<BusId> neighbors(const Network& net, BusId bus);

/// Balance rows are written as (generation - load = 0) inside a maximization,
/// so the raw row dual is the welfare change per extra MW withdrawn. The LMP
/// (price paid by load) is its negation. All LMP reporting goes through here.
inline double lmp_from_balance_dual(double raw_dual) { return -raw_dual; }

}  // namespace flexhedge
