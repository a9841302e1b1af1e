#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "flexhedge/model.hpp"
#include "flexhedge/opf.hpp"

namespace flexhedge::hedging {

/// One (hour, price-constrained bus) settlement line.
struct HedgeRow {
  int hour = 0;
  BusId bus = 0;
  double pi_des = 0.0;
  double lambda_unconstrained = 0.0;  // LMP without flexibility
  double lambda_hedged = 0.0;         // LMP with flexibility
  double p_flexreq = 0.0;             // MW, from the hedged run
  double load_mw = 0.0;               // load at the bus in the hedged run
  double hourly_revenue = 0.0;        // EUR
  bool excluded = false;              // an infeasible pass; no settlement
  /// Informational: revenue does not exceed what the same energy would have
  /// cost from the marginal supplier it displaced, lambda_unconstrained * p_flexreq.
  bool within_displaced_cost = true;

  bool active() const { return !excluded && p_flexreq > kFlexEps; }
  static constexpr double kFlexEps = 1e-9;
};

struct HedgeTotals {
  double total_revenue = 0.0;
  int hours_active = 0;
  double max_price_reduction = 0.0;  // largest lambda_unconstrained - lambda_hedged
  int excluded_hours = 0;            // warning count
};

struct HedgeReport {
  std::vector<PriceCap> caps;
  std::vector<HedgeRow> rows;  // hour-major, then bus ascending
  HedgeTotals totals;
  std::vector<std::string> warnings;

  /// Sum of hourly revenue for one bus.
  double revenue_at(BusId bus) const;
};

struct HedgeRun {
  HedgeReport report;
  std::vector<opf::DispatchResult> unconstrained;
  std::vector<opf::DispatchResult> hedged;
};

/// Revenue of one hour: (lambda - pi_des) * p_flexreq when lambda > pi_des, else 0.
double settle_hour(double lambda_unconstrained, double pi_des, double p_flexreq);

/// Two-pass protocol: price discovery without flexibility, then the
/// flexibility-enabled OPF with the caps, settled hour by hour.
HedgeRun run_hedge(const Network& net, std::span<const HourlyMarketData> series,
                   std::span<const PriceCap> caps);

/// A network variant to sweep over (for example uncongested and congested).
struct LineLimitScenario {
  std::string label;
  Network net;
};

struct SweepRow {
  double pi_des = 0.0;
  std::string scenario;
  double total_revenue = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // pi-major in the given order, then scenarios in order
  std::vector<std::string> warnings;  // monotonicity violations

  double revenue(double pi_des, const std::string& scenario) const;
};

/// One run_hedge per (pi, scenario) with a flat cap at `bus`. `pi_values`
/// must be non-empty and ascending.
SweepResult sweep_pi_des(std::span<const LineLimitScenario> scenarios, std::span<const HourlyMarketData> series,
                         BusId bus, std::span<const double> pi_values);

enum class EventKind { PriceRequest, DsoComputation, FlexRequest, Settlement };

struct TraceEvent {
  EventKind kind = EventKind::PriceRequest;
  int hour = 0;  // 0 for price requests
  BusId bus = 0;
  double value = 0.0;  // cap EUR/MWh, MW, or EUR depending on kind

  bool operator==(const TraceEvent&) const = default;
};

const char* to_string(EventKind kind);

/// Price requests first (one per capped bus, with the first hour's cap),
/// then computation, request and settlement for every active row.
std::vector<TraceEvent> coordination_trace(const HedgeReport& report);

std::string format_event(const TraceEvent& e);

// CSV columns (fixed):
//   hour,bus,pi_des_eur_mwh,lambda_unconstrained_eur_mwh,lambda_hedged_eur_mwh,p_flexreq_mw,load_mw,
//   hourly_revenue_eur,hourly_revenue_display,excluded,within_displaced_cost
void write_report_csv(std::ostream& os, const HedgeReport& report);
HedgeReport read_report_csv(std::istream& is);

/// JSON document; see README for the schema.
std::string report_json(const HedgeReport& report);

// sweep CSV: pi_des_eur_mwh,scenario,total_revenue_eur,total_revenue_display
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);
SweepResult read_sweep_csv(std::istream& is);
std::string sweep_json(const SweepResult& sweep);

}  // namespace flexhedge::hedging
