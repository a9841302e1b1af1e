#include <istream>
#include <map>
#include <ostream>

#include "flexhedge/csv.hpp"
#include "flexhedge/errors.hpp"
#include "flexhedge/opf.hpp"

namespace flexhedge::opf {

namespace {

constexpr const char* kHeader =
    "kind,hour,element,from_bus,to_bus,lmp_eur_mwh,p_gen_mw,p_load_mw,p_flexreq_mw,theta_rad,flow_mw,"
    "congestion_dual_eur_mwh";

}  // namespace

void write_dispatch_csv(std::ostream& os, const Network& net, std::span<const DispatchResult> results) {
  using csv::format_double;
  os << kHeader << '\n';
  for (const DispatchResult& r : results) {
    if (!r.optimal()) {
      os << "status," << r.hour << ',' << csv::escape(std::string(to_string(r.status)) + ": " + r.message)
         << ",,,,,,,,,\n";
      continue;
    }
    for (std::size_t i = 0; i < r.lmp.size(); ++i) {
      os << "bus," << r.hour << ',' << i + 1 << ",,," << format_double(r.lmp[i]) << ','
         << format_double(r.p_gen[i]) << ',' << format_double(r.p_load[i]) << ','
         << format_double(r.p_flexreq[i]) << ',' << format_double(r.theta[i]) << ",,\n";
    }
    for (std::size_t k = 0; k < r.flow.size(); ++k) {
      const Line& line = net.lines.at(k);
      os << "line," << r.hour << ',' << k + 1 << ',' << line.from_bus << ',' << line.to_bus << ",,,,,,"
         << format_double(r.flow[k]) << ',' << format_double(r.congestion_dual[k]) << '\n';
    }
  }
}

std::vector<DispatchResult> read_dispatch_csv(std::istream& is) {
  const csv::Table t = csv::read(is);
  const auto col = [&t](const char* name) { return t.column(name); };
  const std::size_t kind = col("kind"), hour = col("hour"), element = col("element"), lmp = col("lmp_eur_mwh"),
                    gen = col("p_gen_mw"), load = col("p_load_mw"), flex = col("p_flexreq_mw"),
                    theta = col("theta_rad"), flow = col("flow_mw"), cong = col("congestion_dual_eur_mwh");

  std::map<int, DispatchResult> by_hour;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string where = "dispatch csv line " + std::to_string(t.line_numbers[r]);
    const int h = static_cast<int>(csv::parse_int(row[hour], where));
    DispatchResult& d = by_hour[h];
    d.hour = h;
    if (row[kind] == "status") {
      const std::string& text = row[element];
      d.status = text.rfind("unbounded", 0) == 0 ? LpStatus::Unbounded : LpStatus::Infeasible;
      const auto colon = text.find(": ");
      d.message = colon == std::string::npos ? text : text.substr(colon + 2);
      continue;
    }
    d.status = LpStatus::Optimal;
    const auto index = static_cast<std::size_t>(csv::parse_int(row[element], where) - 1);
    auto put = [](std::vector<double>& v, std::size_t at, double x) {
      if (v.size() <= at) v.resize(at + 1, 0.0);
      v[at] = x;
    };
    if (row[kind] == "bus") {
      put(d.lmp, index, csv::parse_double(row[lmp], where));
      put(d.p_gen, index, csv::parse_double(row[gen], where));
      put(d.p_load, index, csv::parse_double(row[load], where));
      put(d.p_flexreq, index, csv::parse_double(row[flex], where));
      put(d.theta, index, csv::parse_double(row[theta], where));
    } else if (row[kind] == "line") {
      put(d.flow, index, csv::parse_double(row[flow], where));
      put(d.congestion_dual, index, csv::parse_double(row[cong], where));
    } else {
      throw ParseError(where + ": unknown row kind '" + row[kind] + "'");
    }
  }
  std::vector<DispatchResult> out;
  for (auto& [h, d] : by_hour) out.push_back(std::move(d));
  return out;
}

}  // namespace flexhedge::opf
