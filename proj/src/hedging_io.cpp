#include <cmath>
#include <istream>
#include <ostream>

#include "json.hpp"

#include "flexhedge/csv.hpp"
#include "flexhedge/errors.hpp"
#include "flexhedge/hedging.hpp"

namespace flexhedge::hedging {

namespace detail {
void finalize_totals(HedgeReport& report);
}

namespace {

using csv::format_double;
using csv::format_money;
using nlohmann::json;

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

bool parse_bool(const std::string& s, const std::string& where) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw ParseError(where + ": expected 0/1, got '" + s + "'");
}

}  // namespace

void write_report_csv(std::ostream& os, const HedgeReport& report) {
  os << "hour,bus,pi_des_eur_mwh,lambda_unconstrained_eur_mwh,lambda_hedged_eur_mwh,p_flexreq_mw,load_mw,"
        "hourly_revenue_eur,hourly_revenue_display,excluded,within_displaced_cost\n";
  for (const HedgeRow& r : report.rows) {
    os << r.hour << ',' << r.bus << ',' << format_double(r.pi_des) << ',' << format_double(r.lambda_unconstrained)
       << ',' << format_double(r.lambda_hedged) << ',' << format_double(r.p_flexreq) << ','
       << format_double(r.load_mw) << ',' << format_double(r.hourly_revenue) << ',' << format_money(r.hourly_revenue)
       << ',' << (r.excluded ? 1 : 0) << ',' << (r.within_displaced_cost ? 1 : 0) << '\n';
  }
}

HedgeReport read_report_csv(std::istream& is) {
  const csv::Table t = csv::read(is);
  HedgeReport report;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    const std::string where = "hedge report line " + std::to_string(t.line_numbers[i]);
    auto num = [&](const char* name) { return csv::parse_double(row[t.column(name)], where); };
    HedgeRow r;
    r.hour = static_cast<int>(csv::parse_int(row[t.column("hour")], where));
    r.bus = static_cast<BusId>(csv::parse_int(row[t.column("bus")], where));
    r.pi_des = num("pi_des_eur_mwh");
    r.lambda_unconstrained = num("lambda_unconstrained_eur_mwh");
    r.lambda_hedged = num("lambda_hedged_eur_mwh");
    r.p_flexreq = num("p_flexreq_mw");
    r.load_mw = num("load_mw");
    r.hourly_revenue = num("hourly_revenue_eur");
    r.excluded = parse_bool(row[t.column("excluded")], where);
    r.within_displaced_cost = parse_bool(row[t.column("within_displaced_cost")], where);
    report.rows.push_back(r);
  }
  detail::finalize_totals(report);
  return report;
}

std::string report_json(const HedgeReport& report) {
  json doc;
  doc["caps"] = json::array();
  for (const PriceCap& c : report.caps) doc["caps"].push_back({{"bus", c.bus}, {"pi_des_eur_mwh", c.cap_eur_per_mwh}});
  const HedgeTotals& t = report.totals;
  doc["totals"] = {{"total_revenue_eur", t.total_revenue},
                   {"total_revenue_display", format_money(t.total_revenue)},
                   {"hours_active", t.hours_active},
                   {"max_price_reduction_eur_mwh", t.max_price_reduction},
                   {"excluded_hours", t.excluded_hours}};
  doc["hours"] = json::array();
  for (const HedgeRow& r : report.rows) {
    doc["hours"].push_back({{"hour", r.hour},
                            {"bus", r.bus},
                            {"pi_des_eur_mwh", r.pi_des},
                            {"lambda_unconstrained_eur_mwh", number(r.lambda_unconstrained)},
                            {"lambda_hedged_eur_mwh", number(r.lambda_hedged)},
                            {"p_flexreq_mw", r.p_flexreq},
                            {"load_mw", r.load_mw},
                            {"hourly_revenue_eur", r.hourly_revenue},
                            {"hourly_revenue_display", format_money(r.hourly_revenue)},
                            {"excluded", r.excluded},
                            {"within_displaced_cost", r.within_displaced_cost}});
  }
  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  os << "pi_des_eur_mwh,scenario,total_revenue_eur,total_revenue_display\n";
  for (const SweepRow& r : sweep.rows) {
    os << format_double(r.pi_des) << ',' << csv::escape(r.scenario) << ',' << format_double(r.total_revenue) << ','
       << format_money(r.total_revenue) << '\n';
  }
}

SweepResult read_sweep_csv(std::istream& is) {
  const csv::Table t = csv::read(is);
  SweepResult out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    const std::string where = "sweep line " + std::to_string(t.line_numbers[i]);
    out.rows.push_back({csv::parse_double(row[t.column("pi_des_eur_mwh")], where), row[t.column("scenario")],
                        csv::parse_double(row[t.column("total_revenue_eur")], where)});
  }
  return out;
}

std::string sweep_json(const SweepResult& sweep) {
  json doc;
  doc["rows"] = json::array();
  for (const SweepRow& r : sweep.rows) {
    doc["rows"].push_back({{"pi_des_eur_mwh", r.pi_des},
                           {"scenario", r.scenario},
                           {"total_revenue_eur", r.total_revenue},
                           {"total_revenue_display", format_money(r.total_revenue)}});
  }
  doc["warnings"] = sweep.warnings;
  return doc.dump(2) + "\n";
}

}  // namespace flexhedge::hedging
