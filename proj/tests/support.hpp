#pragma once

#include <random>
#include <vector>

#include "flexhedge/ed.hpp"
#include "flexhedge/model.hpp"

namespace support {

using namespace flexhedge;

inline Network triangle(std::optional<double> limit_23 = std::nullopt, std::optional<double> limit_other = std::nullopt) {
  Network net;
  net.buses = {{1, true, false}, {2, false, false}, {3, false, true}};
  net.lines = {{1, 2, 0.1, limit_other}, {1, 3, 0.1, limit_other}, {2, 3, 0.1, limit_23}};
  return net;
}

inline Network single_bus() {
  Network net;
  net.buses = {{1, true, true}};
  return net;
}

/// Import at bus 1, distributed generation at bus 2, load at bus 3.
inline HourlyMarketData triangle_hour(int hour, double a_trans, double a_dist, double b_load, double p_min,
                                      double p_max, double dist_cap = 0.7, double trans_cap = 2.0) {
  HourlyMarketData d;
  d.hour = hour;
  d.offers = {{1, a_trans, 0.0, trans_cap}, {2, a_dist, 0.0, dist_cap}};
  d.utilities = {{3, b_load, 0.0, p_min, p_max}};
  return d;
}

/// Random single-bus instance with a feasible primal.
inline ed::EdInstance random_ed(std::mt19937_64& rng, bool with_cap) {
  std::uniform_real_distribution<double> price(10.0, 100.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ed::EdInstance inst;
  const double p_min = unit(rng) < 0.3 ? 0.0 : unit(rng);
  const double p_max = p_min + unit(rng);
  const double capacity = unit(rng) < 0.3 ? kInf : p_min + 1.5 * unit(rng);
  inst.offer = {1, price(rng), 5.0 * unit(rng), capacity};
  inst.utility = {1, price(rng), 5.0 * unit(rng), p_min, p_max};
  if (with_cap) inst.cap = price(rng);
  return inst;
}

}  // namespace support
