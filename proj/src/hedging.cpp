#include "flexhedge/hedging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "flexhedge/csv.hpp"
#include "flexhedge/errors.hpp"

namespace flexhedge::hedging {

namespace detail {
void finalize_totals(HedgeReport& report);
}

double settle_hour(double lambda_unconstrained, double pi_des, double p_flexreq) {
  if (!(lambda_unconstrained > pi_des)) return 0.0;
  return (lambda_unconstrained - pi_des) * p_flexreq;
}

double HedgeReport::revenue_at(BusId bus) const {
  double sum = 0.0;
  for (const HedgeRow& r : rows) {
    if (r.bus == bus) sum += r.hourly_revenue;
  }
  return sum;
}

void detail::finalize_totals(HedgeReport& report) {
  HedgeTotals t;
  std::set<int> active_hours;
  std::set<int> excluded_hours;
  for (const HedgeRow& r : report.rows) {
    if (r.excluded) {
      excluded_hours.insert(r.hour);
      continue;
    }
    t.total_revenue += r.hourly_revenue;
    if (r.active()) active_hours.insert(r.hour);
    t.max_price_reduction = std::max(t.max_price_reduction, r.lambda_unconstrained - r.lambda_hedged);
  }
  t.hours_active = static_cast<int>(active_hours.size());
  t.excluded_hours = static_cast<int>(excluded_hours.size());
  report.totals = t;
}

HedgeRun run_hedge(const Network& net, std::span<const HourlyMarketData> series,
                   std::span<const PriceCap> caps) {
  if (caps.empty()) throw InvalidInput("run_hedge: at least one price cap is required");
  std::vector<PriceCap> sorted(caps.begin(), caps.end());
  std::sort(sorted.begin(), sorted.end(), [](const PriceCap& a, const PriceCap& b) { return a.bus < b.bus; });
  if (const auto problems = validate_caps(net, sorted); !problems.empty()) {
    throw InvalidInput("run_hedge: " + problems.front());
  }

  HedgeRun run;
  run.unconstrained = opf::solve_opf_series(net, series, {}, false);
  run.hedged = opf::solve_opf_series(net, series, sorted, true);

  HedgeReport& report = run.report;
  report.caps = sorted;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t h = 0; h < series.size(); ++h) {
    const opf::DispatchResult& before = run.unconstrained[h];
    const opf::DispatchResult& after = run.hedged[h];
    for (const PriceCap& cap : sorted) {
      HedgeRow row;
      row.hour = series[h].hour;
      row.bus = cap.bus;
      row.pi_des = cap.at(row.hour);
      row.lambda_unconstrained = before.optimal() ? before.lmp_at(cap.bus) : nan;
      row.lambda_hedged = after.optimal() ? after.lmp_at(cap.bus) : nan;
      if (!before.optimal() || !after.optimal()) {
        row.excluded = true;
        std::ostringstream os;
        os << "hour " << row.hour << " bus " << cap.bus << ": excluded from settlement ("
           << (!before.optimal() ? "unconstrained pass " : "hedged pass ")
           << to_string(!before.optimal() ? before.status : after.status) << ")";
        report.warnings.push_back(os.str());
      } else {
        row.p_flexreq = after.flex_at(cap.bus);
        row.load_mw = after.load_at(cap.bus);
        row.hourly_revenue = settle_hour(row.lambda_unconstrained, row.pi_des, row.p_flexreq);
        row.within_displaced_cost = row.hourly_revenue <= row.lambda_unconstrained * row.p_flexreq + 1e-9;
      }
      report.rows.push_back(row);
    }
  }
  detail::finalize_totals(report);
  return run;
}

double SweepResult::revenue(double pi_des, const std::string& scenario) const {
  for (const SweepRow& r : rows) {
    if (r.pi_des == pi_des && r.scenario == scenario) return r.total_revenue;
  }
  throw InvalidInput("sweep: no row for scenario '" + scenario + "' at pi_des " + csv::format_double(pi_des));
}

SweepResult sweep_pi_des(std::span<const LineLimitScenario> scenarios, std::span<const HourlyMarketData> series,
                         BusId bus, std::span<const double> pi_values) {
  if (pi_values.empty()) throw InvalidInput("sweep: empty list of pi_des values");
  if (!std::is_sorted(pi_values.begin(), pi_values.end())) {
    throw InvalidInput("sweep: pi_des values must be in ascending order");
  }
  if (scenarios.empty()) throw InvalidInput("sweep: no scenarios");

  SweepResult out;
  for (double pi : pi_values) {
    const PriceCap cap = PriceCap::flat(bus, pi);
    for (const LineLimitScenario& sc : scenarios) {
      const HedgeRun run = run_hedge(sc.net, series, std::span<const PriceCap>(&cap, 1));
      out.rows.push_back({pi, sc.label, run.report.totals.total_revenue});
    }
  }
  for (const LineLimitScenario& sc : scenarios) {
    for (std::size_t k = 1; k < pi_values.size(); ++k) {
      const double lo = out.revenue(pi_values[k - 1], sc.label);
      const double hi = out.revenue(pi_values[k], sc.label);
      if (hi > lo + 1e-9) {
        out.warnings.push_back("scenario '" + sc.label + "': revenue rises from " + csv::format_money(lo) +
                               " at pi_des " + csv::format_double(pi_values[k - 1]) + " to " +
                               csv::format_money(hi) + " at pi_des " + csv::format_double(pi_values[k]));
      }
    }
  }
  return out;
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::PriceRequest: return "PriceRequest";
    case EventKind::DsoComputation: return "DsoComputation";
    case EventKind::FlexRequest: return "FlexRequest";
    case EventKind::Settlement: return "Settlement";
  }
  return "?";
}

std::vector<TraceEvent> coordination_trace(const HedgeReport& report) {
  std::vector<TraceEvent> events;
  for (const PriceCap& cap : report.caps) {
    events.push_back({EventKind::PriceRequest, 0, cap.bus, cap.at(1)});
  }
  if (report.caps.empty()) {
    std::set<BusId> buses;
    for (const HedgeRow& r : report.rows) buses.insert(r.bus);
    for (BusId b : buses) {
      for (const HedgeRow& r : report.rows) {
        if (r.bus == b) {
          events.push_back({EventKind::PriceRequest, 0, b, r.pi_des});
          break;
        }
      }
    }
  }
  for (const HedgeRow& r : report.rows) {
    if (!r.active()) continue;
    events.push_back({EventKind::DsoComputation, r.hour, r.bus, r.p_flexreq});
    events.push_back({EventKind::FlexRequest, r.hour, r.bus, r.p_flexreq});
    events.push_back({EventKind::Settlement, r.hour, r.bus, r.hourly_revenue});
  }
  return events;
}

std::string format_event(const TraceEvent& e) {
  std::ostringstream os;
  switch (e.kind) {
    case EventKind::PriceRequest:
      os << "PriceRequest bus=" << e.bus << " pi_des=" << csv::format_double(e.value) << " EUR/MWh";
      break;
    case EventKind::DsoComputation:
      os << "DsoComputation hour=" << e.hour << " bus=" << e.bus << " p_flexreq=" << csv::format_double(e.value)
         << " MW";
      break;
    case EventKind::FlexRequest:
      os << "FlexRequest hour=" << e.hour << " bus=" << e.bus << " mw=" << csv::format_double(e.value);
      break;
    case EventKind::Settlement:
      os << "Settlement hour=" << e.hour << " bus=" << e.bus << " eur=" << csv::format_money(e.value);
      break;
  }
  return os.str();
}

}  // namespace flexhedge::hedging
