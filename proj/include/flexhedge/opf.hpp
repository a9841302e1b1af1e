#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "flexhedge/lp.hpp"
#include "flexhedge/model.hpp"

namespace flexhedge::opf {

/// Inputs for one hour. Non-owning: the referenced objects must outlive it.
struct OpfHourInput {
  const Network& net;
  const HourlyMarketData& data;
  std::span<const PriceCap> caps;
  bool flexibility_enabled = false;
};

/// The LP of one hour plus where each quantity lives in it. Index vectors are
/// keyed by bus id - 1 (or line position) and hold -1 where absent.
struct OpfModel {
  LinearProgram lp;
  std::vector<int> gen_col;
  std::vector<int> load_col;
  std::vector<int> theta_col;
  std::vector<int> flex_col;
  std::vector<int> balance_row;
  int angle_row = -1;
  std::vector<int> line_max_row;  // flow <= limit
  std::vector<int> line_min_row;  // flow >= -limit
};

/// Hourly DC-OPF:
///   maximize  sum b*P_L + c_load - a*P_G - c_gen - sum_K cap*P_flex
///   s.t.      P_G - P_L (+ P_flex at K) - sum_j (theta_i - theta_j)/X_ij = 0   every bus
///             theta_slack = 0
///             -limit <= (theta_i - theta_j)/X_ij <= limit                      bounded lines
///             P_L in [p_min, p_max] (absent loads fixed at 0), P_G in [0, capacity],
///             P_flex >= 0
/// Throws InvalidInput for invalid data, or caps given with flexibility disabled.
OpfModel build_opf(const OpfHourInput& in);

struct DispatchResult {
  int hour = 0;
  LpStatus status = LpStatus::Infeasible;
  std::string message;  // diagnostic for non-optimal hours
  std::vector<double> p_gen;      // per bus, MW
  std::vector<double> p_load;     // per bus, MW
  std::vector<double> p_flexreq;  // per bus, MW (zero outside K)
  std::vector<double> theta;      // per bus, rad
  std::vector<double> lmp;        // per bus, EUR/MWh
  std::vector<double> flow;       // per line (from -> to), MW
  /// Per line: the shadow price of the binding limit, positive when the
  /// forward limit binds and negative when the reverse limit binds.
  std::vector<double> congestion_dual;
  double objective = 0.0;
  bool degenerate = false;
  LpSolution solution;

  bool optimal() const { return status == LpStatus::Optimal; }
  /// Bus-indexed accessors (1-based ids).
  double lmp_at(BusId bus) const { return lmp.at(static_cast<std::size_t>(bus - 1)); }
  double gen_at(BusId bus) const { return p_gen.at(static_cast<std::size_t>(bus - 1)); }
  double load_at(BusId bus) const { return p_load.at(static_cast<std::size_t>(bus - 1)); }
  double flex_at(BusId bus) const { return p_flexreq.at(static_cast<std::size_t>(bus - 1)); }
};

/// Solve one hour. Infeasible hours come back with status Infeasible and a
/// message naming the hour; they do not throw.
DispatchResult solve_opf_hour(const OpfHourInput& in);

/// All hours of a day, solved in parallel (OpenMP) with results in input order.
std::vector<DispatchResult> solve_opf_series(const Network& net, std::span<const HourlyMarketData> series,
                                             std::span<const PriceCap> caps, bool flexibility_enabled);

/// Sequential reference for solve_opf_series.
std::vector<DispatchResult> solve_opf_series_serial(const Network& net,
                                                    std::span<const HourlyMarketData> series,
                                                    std::span<const PriceCap> caps,
                                                    bool flexibility_enabled);

/// Sum over buses of P_G - P_L + P_flex. Zero up to solver tolerance.
double injection_imbalance(const DispatchResult& r);

// CSV export. Column order (fixed):
//   kind,hour,element,from_bus,to_bus,lmp_eur_mwh,p_gen_mw,p_load_mw,p_flexreq_mw,theta_rad,flow_mw,congestion_dual_eur_mwh
// `kind` is "bus" (element = bus id, line columns empty) or "line"
// (element = line position, 1-based; bus columns empty). Non-optimal hours
// produce one "status" row with the message in `element`.
void write_dispatch_csv(std::ostream& os, const Network& net, std::span<const DispatchResult> results);

/// Reads what write_dispatch_csv writes. The LP solution is not restored.
std::vector<DispatchResult> read_dispatch_csv(std::istream& is);

}  // namespace flexhedge::opf
