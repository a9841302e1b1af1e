#include "flexhedge/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>

#include "flexhedge/errors.hpp"

namespace flexhedge {

namespace {

std::string line_label(std::size_t index, const Line& line) {
  std::ostringstream os;
  os << "line " << index + 1 << " (" << line.from_bus << "-" << line.to_bus << ")";
  return os.str();
}

}  // namespace

bool Network::has_bus(BusId id) const {
  return std::any_of(buses.begin(), buses.end(), [id](const Bus& b) { return b.id == id; });
}

const Bus& Network::bus(BusId id) const {
  for (const Bus& b : buses) {
    if (b.id == id) return b;
  }
  throw InvalidInput("unknown bus " + std::to_string(id));
}

BusId Network::slack_bus() const {
  for (const Bus& b : buses) {
    if (b.is_slack) return b.id;
  }
  throw InvalidInput("network has no slack bus");
}

std::vector<BusId> Network::price_constrained_buses() const {
  std::vector<BusId> k;
  for (const Bus& b : buses) {
    if (b.price_constrained) k.push_back(b.id);
  }
  std::sort(k.begin(), k.end());
  return k;
}

std::optional<std::size_t> Network::line_between(BusId a, BusId b) const {
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].connects(a, b)) return i;
  }
  return std::nullopt;
}

double PriceCap::at(int hour) const {
  if (cap_eur_per_mwh.empty()) {
    throw InvalidInput("price cap at bus " + std::to_string(bus) + " has no values");
  }
  if (cap_eur_per_mwh.size() == 1) return cap_eur_per_mwh.front();
  if (hour < 1 || static_cast<std::size_t>(hour) > cap_eur_per_mwh.size()) {
    throw InvalidInput("price cap at bus " + std::to_string(bus) + " has no value for hour " +
                       std::to_string(hour));
  }
  return cap_eur_per_mwh[static_cast<std::size_t>(hour - 1)];
}

const GenOffer* HourlyMarketData::offer_at(BusId bus) const {
  for (const GenOffer& o : offers) {
    if (o.bus == bus) return &o;
  }
  return nullptr;
}

const LoadUtility* HourlyMarketData::utility_at(BusId bus) const {
  for (const LoadUtility& u : utilities) {
    if (u.bus == bus) return &u;
  }
  return nullptr;
}

std::vector<std::string> validate_network(const Network& net) {
  std::vector<std::string> out;

  std::vector<BusId> slacks;
  for (const Bus& b : net.buses) {
    if (b.is_slack) slacks.push_back(b.id);
  }
  if (slacks.empty()) out.emplace_back("no slack bus");
  if (net.buses.empty()) {
    out.emplace_back("empty network");
    return out;
  }
  if (slacks.size() > 1) {
    std::ostringstream os;
    os << "multiple slack buses:";
    for (BusId id : slacks) os << " " << id;
    out.push_back(os.str());
  }

  const auto n = static_cast<BusId>(net.buses.size());
  std::map<BusId, int> seen;
  for (const Bus& b : net.buses) {
    if (b.id < 1 || b.id > n) {
      out.push_back("bus " + std::to_string(b.id) + ": ids must be dense 1.." + std::to_string(n));
    }
    if (++seen[b.id] == 2) out.push_back("bus " + std::to_string(b.id) + ": duplicate id");
  }

  for (std::size_t i = 0; i < net.lines.size(); ++i) {
    const Line& line = net.lines[i];
    const std::string label = line_label(i, line);
    if (!seen.count(line.from_bus)) out.push_back(label + ": unknown bus " + std::to_string(line.from_bus));
    if (!seen.count(line.to_bus)) out.push_back(label + ": unknown bus " + std::to_string(line.to_bus));
    if (line.from_bus == line.to_bus) out.push_back(label + ": from_bus equals to_bus");
    if (!(line.reactance_pu > 0.0) || !std::isfinite(line.reactance_pu)) {
      std::ostringstream os;
      os << label << ": reactance_pu must be > 0 (got " << line.reactance_pu << ")";
      out.push_back(os.str());
    }
    if (line.flow_limit_mw && !(*line.flow_limit_mw > 0.0)) {
      std::ostringstream os;
      os << label << ": flow_limit_mw must be > 0 (got " << *line.flow_limit_mw << ")";
      out.push_back(os.str());
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (net.lines[j].connects(line.from_bus, line.to_bus)) {
        out.push_back(label + ": parallel to " + line_label(j, net.lines[j]));
        break;
      }
    }
  }

  if (slacks.size() == 1) {
    std::set<BusId> reached{slacks.front()};
    std::queue<BusId> frontier;
    frontier.push(slacks.front());
    while (!frontier.empty()) {
      const BusId at = frontier.front();
      frontier.pop();
      for (const Line& line : net.lines) {
        BusId other = 0;
        if (line.from_bus == at) other = line.to_bus;
        else if (line.to_bus == at) other = line.from_bus;
        else continue;
        if (reached.insert(other).second) frontier.push(other);
      }
    }
    std::vector<BusId> ids;
    for (const Bus& b : net.buses) ids.push_back(b.id);
    std::sort(ids.begin(), ids.end());
    for (BusId id : ids) {
      if (!reached.count(id)) out.push_back("bus " + std::to_string(id) + " unreachable from slack");
    }
  }
  return out;
}

std::vector<std::string> validate_market_data(const Network& net, const HourlyMarketData& data) {
  std::vector<std::string> out;
  const std::string prefix = "hour " + std::to_string(data.hour) + ": ";
  if (data.hour < 1 || data.hour > kHoursPerDay) out.push_back(prefix + "hour must be in 1..24");

  std::set<BusId> offer_buses;
  for (const GenOffer& o : data.offers) {
    const std::string who = prefix + "offer at bus " + std::to_string(o.bus);
    if (!net.has_bus(o.bus)) out.push_back(who + ": unknown bus");
    if (!offer_buses.insert(o.bus).second) out.push_back(who + ": more than one offer at this bus");
    if (!(o.marginal_cost >= 0.0)) out.push_back(who + ": marginal_cost must be >= 0");
    if (!(o.capacity_mw >= 0.0)) out.push_back(who + ": capacity_mw must be >= 0");
    if (!std::isfinite(o.constant_cost)) out.push_back(who + ": constant_cost must be finite");
  }

  std::set<BusId> load_buses;
  for (const LoadUtility& u : data.utilities) {
    const std::string who = prefix + "load at bus " + std::to_string(u.bus);
    if (!net.has_bus(u.bus)) out.push_back(who + ": unknown bus");
    if (!load_buses.insert(u.bus).second) out.push_back(who + ": more than one utility at this bus");
    if (!(u.p_min_mw >= 0.0)) out.push_back(who + ": p_min_mw must be >= 0");
    if (!(u.p_min_mw <= u.p_max_mw)) out.push_back(who + ": load bounds inverted (p_min_mw > p_max_mw)");
    if (!std::isfinite(u.p_max_mw)) out.push_back(who + ": p_max_mw must be finite");
    if (!std::isfinite(u.marginal_utility) || !std::isfinite(u.constant_utility)) {
      out.push_back(who + ": utility coefficients must be finite");
    }
  }
  return out;
}

std::vector<std::string> validate_caps(const Network& net, const std::vector<PriceCap>& caps) {
  std::vector<std::string> out;
  std::set<BusId> seen;
  for (const PriceCap& cap : caps) {
    const std::string who = "price cap at bus " + std::to_string(cap.bus);
    if (!net.has_bus(cap.bus)) {
      out.push_back(who + ": unknown bus");
      continue;
    }
    if (!net.bus(cap.bus).price_constrained) out.push_back(who + ": bus is not price constrained");
    if (!seen.insert(cap.bus).second) out.push_back(who + ": duplicate cap");
    if (cap.cap_eur_per_mwh.size() != 1 && cap.cap_eur_per_mwh.size() != kHoursPerDay) {
      out.push_back(who + ": expected 1 or 24 values");
    }
    for (double v : cap.cap_eur_per_mwh) {
      if (!(v >= 0.0)) {
        out.push_back(who + ": cap must be >= 0 at every hour");
        break;
      }
    }
  }
  return out;
}

std::set<BusId> neighbors(const Network& net, BusId bus) {
  if (!net.has_bus(bus)) throw InvalidInput("neighbors: unknown bus " + std::to_string(bus));
  std::set<BusId> out;
  for (const Line& line : net.lines) {
    if (line.from_bus == bus) out.insert(line.to_bus);
    else if (line.to_bus == bus) out.insert(line.from_bus);
  }
  return out;
}

}  // namespace flexhedge
