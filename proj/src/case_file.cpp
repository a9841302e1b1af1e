#include "flexhedge/case_file.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "flexhedge/csv.hpp"
#include "flexhedge/errors.hpp"

namespace flexhedge::casefile {

namespace {

using csv::format_double;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> fields(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string f;
  while (is >> f) out.push_back(f);
  return out;
}

HourlyMarketData& hour_slot(std::vector<HourlyMarketData>& hours, int hour) {
  auto it = std::lower_bound(hours.begin(), hours.end(), hour,
                             [](const HourlyMarketData& d, int h) { return d.hour < h; });
  if (it == hours.end() || it->hour != hour) {
    HourlyMarketData d;
    d.hour = hour;
    it = hours.insert(it, std::move(d));
  }
  return *it;
}

}  // namespace

void write_case(std::ostream& os, const CaseData& data) {
  os << "# flexhedge case file\n";
  for (const auto& [k, v] : data.settings) {
    if (k != "hours") os << k << " = " << v << '\n';
  }
  os << "hours = " << data.hours.size() << "\n\n";

  os << "[buses]\n# id slack price_constrained\n";
  for (const Bus& b : data.net.buses) {
    os << b.id << ' ' << (b.is_slack ? 1 : 0) << ' ' << (b.price_constrained ? 1 : 0) << '\n';
  }
  os << "\n[lines]\n# from to reactance_pu flow_limit_mw\n";
  for (const Line& l : data.net.lines) {
    os << l.from_bus << ' ' << l.to_bus << ' ' << format_double(l.reactance_pu) << ' '
       << (l.flow_limit_mw ? format_double(*l.flow_limit_mw) : "inf") << '\n';
  }
  os << "\n[offers]\n# hour bus marginal_cost constant_cost capacity_mw\n";
  for (const HourlyMarketData& h : data.hours) {
    for (const GenOffer& o : h.offers) {
      os << h.hour << ' ' << o.bus << ' ' << format_double(o.marginal_cost) << ' ' << format_double(o.constant_cost)
         << ' ' << format_double(o.capacity_mw) << '\n';
    }
  }
  os << "\n[utilities]\n# hour bus marginal_utility constant_utility p_min_mw p_max_mw\n";
  for (const HourlyMarketData& h : data.hours) {
    for (const LoadUtility& u : h.utilities) {
      os << h.hour << ' ' << u.bus << ' ' << format_double(u.marginal_utility) << ' '
         << format_double(u.constant_utility) << ' ' << format_double(u.p_min_mw) << ' '
         << format_double(u.p_max_mw) << '\n';
    }
  }
  os << "\n[caps]\n# bus hour|* cap_eur_mwh\n";
  for (const PriceCap& c : data.caps) {
    if (c.cap_eur_per_mwh.size() == 1) {
      os << c.bus << " * " << format_double(c.cap_eur_per_mwh.front()) << '\n';
      continue;
    }
    for (std::size_t h = 0; h < c.cap_eur_per_mwh.size(); ++h) {
      os << c.bus << ' ' << h + 1 << ' ' << format_double(c.cap_eur_per_mwh[h]) << '\n';
    }
  }
}

CaseData read_case(std::istream& is) {
  CaseData data;
  std::string section;
  std::string raw;
  int number = 0;
  std::map<BusId, std::vector<std::pair<int, double>>> hourly_caps;
  std::vector<BusId> cap_order;

  while (std::getline(is, raw)) {
    ++number;
    const std::string where = "case file line " + std::to_string(number);
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"settings", "buses", "lines", "offers", "utilities", "caps"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known)) {
        throw ParseError(where + ": unknown section [" + section + "]");
      }
      continue;
    }

    if (section.empty() || section == "settings") {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      if (key.empty()) throw ParseError(where + ": empty key");
      data.settings[key] = trim(line.substr(eq + 1));
      continue;
    }

    const auto f = fields(line);
    auto need = [&](std::size_t n) {
      if (f.size() != n) {
        throw ParseError(where + ": [" + section + "] rows have " + std::to_string(n) + " fields, found " +
                         std::to_string(f.size()));
      }
    };
    auto num = [&](std::size_t i) { return csv::parse_double(f[i], where); };
    auto integer = [&](std::size_t i) { return static_cast<int>(csv::parse_int(f[i], where)); };
    auto flag = [&](std::size_t i) {
      if (f[i] != "0" && f[i] != "1") throw ParseError(where + ": expected 0 or 1, found '" + f[i] + "'");
      return f[i] == "1";
    };

    if (section == "buses") {
      need(3);
      data.net.buses.push_back({integer(0), flag(1), flag(2)});
    } else if (section == "lines") {
      need(4);
      Line l{integer(0), integer(1), num(2), std::nullopt};
      if (f[3] != "inf") l.flow_limit_mw = num(3);
      data.net.lines.push_back(l);
    } else if (section == "offers") {
      need(5);
      hour_slot(data.hours, integer(0)).offers.push_back({integer(1), num(2), num(3), num(4)});
    } else if (section == "utilities") {
      need(6);
      hour_slot(data.hours, integer(0)).utilities.push_back({integer(1), num(2), num(3), num(4), num(5)});
    } else if (section == "caps") {
      need(3);
      const BusId bus = integer(0);
      if (std::find(cap_order.begin(), cap_order.end(), bus) == cap_order.end()) cap_order.push_back(bus);
      hourly_caps[bus].emplace_back(f[1] == "*" ? 0 : integer(1), num(2));
    }
  }

  if (const auto it = data.settings.find("hours"); it != data.settings.end()) {
    const long n = csv::parse_int(it->second, "case file setting 'hours'");
    for (int h = 1; h <= n; ++h) hour_slot(data.hours, h);
    data.settings.erase(it);
  }

  for (BusId bus : cap_order) {
    auto& entries = hourly_caps[bus];
    PriceCap cap{bus, {}};
    if (entries.size() == 1 && entries.front().first == 0) {
      cap.cap_eur_per_mwh = {entries.front().second};
    } else {
      cap.cap_eur_per_mwh.assign(kHoursPerDay, 0.0);
      std::vector<bool> seen(kHoursPerDay, false);
      for (const auto& [hour, value] : entries) {
        if (hour < 1 || hour > kHoursPerDay || seen[hour - 1]) {
          throw ParseError("case file: caps at bus " + std::to_string(bus) +
                           " need either one '*' row or hours 1..24 exactly once");
        }
        seen[hour - 1] = true;
        cap.cap_eur_per_mwh[hour - 1] = value;
      }
      if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw ParseError("case file: caps at bus " + std::to_string(bus) + " are missing hours");
      }
    }
    data.caps.push_back(std::move(cap));
  }
  return data;
}

CaseData load_case(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open case file " + path.string());
  return read_case(in);
}

void save_case(const std::filesystem::path& path, const CaseData& data) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write case file " + path.string());
  write_case(out, data);
}

}  // namespace flexhedge::casefile
