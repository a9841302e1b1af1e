#include "flexhedge/opf.hpp"

#include <cmath>
#include <string>

#include "flexhedge/errors.hpp"

namespace flexhedge::opf {

namespace {

void throw_if_any(const std::string& what, const std::vector<std::string>& problems) {
  if (problems.empty()) return;
  std::string msg = what + ":";
  for (const auto& p : problems) msg += " " + p + ";";
  throw InvalidInput(msg);
}

std::string tag(const char* stem, int id) { return std::string(stem) + "_" + std::to_string(id); }

const PriceCap* cap_for(std::span<const PriceCap> caps, BusId bus) {
  for (const PriceCap& c : caps) {
    if (c.bus == bus) return &c;
  }
  return nullptr;
}

}  // namespace

OpfModel build_opf(const OpfHourInput& in) {
  const Network& net = in.net;
  throw_if_any("invalid network", validate_network(net));
  throw_if_any("invalid market data", validate_market_data(net, in.data));
  if (!in.caps.empty() && !in.flexibility_enabled) {
    throw InvalidInput("price caps given while flexibility is disabled");
  }
  throw_if_any("invalid price caps", validate_caps(net, {in.caps.begin(), in.caps.end()}));

  const int n = static_cast<int>(net.bus_count());
  const auto nu = static_cast<std::size_t>(n);
  OpfModel m;
  m.gen_col.assign(nu, -1);
  m.load_col.assign(nu, -1);
  m.theta_col.assign(nu, -1);
  m.flex_col.assign(nu, -1);
  m.balance_row.assign(nu, -1);
  LinearProgram& lp = m.lp;
  double constant = 0.0;

  for (int id = 1; id <= n; ++id) {
    if (const GenOffer* o = in.data.offer_at(id)) {
      m.gen_col[id - 1] = lp.add_column(tag("p_gen", id), 0.0, o->capacity_mw, -o->marginal_cost);
      constant -= o->constant_cost;
    }
  }
  for (int id = 1; id <= n; ++id) {
    if (const LoadUtility* u = in.data.utility_at(id)) {
      m.load_col[id - 1] = lp.add_column(tag("p_load", id), u->p_min_mw, u->p_max_mw, u->marginal_utility);
      constant += u->constant_utility;
    }
  }
  if (in.flexibility_enabled) {
    for (BusId id : net.price_constrained_buses()) {
      // A price-constrained bus without a cap has nothing to price flexibility at.
      if (const PriceCap* cap = cap_for(in.caps, id)) {
        m.flex_col[id - 1] = lp.add_column(tag("p_flexreq", id), 0.0, kInf, -cap->at(in.data.hour));
      }
    }
  }
  for (int id = 1; id <= n; ++id) m.theta_col[id - 1] = lp.add_column(tag("theta", id), -kInf, kInf);
  lp.set_objective_constant(constant);

  for (int id = 1; id <= n; ++id) {
    const int row = lp.add_row(tag("balance", id), Relation::Equal, 0.0);
    m.balance_row[id - 1] = row;
    if (m.gen_col[id - 1] >= 0) lp.add_coefficient(row, m.gen_col[id - 1], 1.0);
    if (m.load_col[id - 1] >= 0) lp.add_coefficient(row, m.load_col[id - 1], -1.0);
    if (m.flex_col[id - 1] >= 0) lp.add_coefficient(row, m.flex_col[id - 1], 1.0);
    double diagonal = 0.0;
    for (const Line& line : net.lines) {
      BusId other = 0;
      if (line.from_bus == id) other = line.to_bus;
      else if (line.to_bus == id) other = line.from_bus;
      else continue;
      diagonal += line.susceptance();
      lp.add_coefficient(row, m.theta_col[other - 1], line.susceptance());
    }
    if (diagonal != 0.0) lp.add_coefficient(row, m.theta_col[id - 1], -diagonal);
  }

  m.angle_row = lp.add_row("angle_ref", Relation::Equal, 0.0, {{m.theta_col[net.slack_bus() - 1], 1.0}});

  m.line_max_row.assign(net.lines.size(), -1);
  m.line_min_row.assign(net.lines.size(), -1);
  for (std::size_t k = 0; k < net.lines.size(); ++k) {
    const Line& line = net.lines[k];
    if (!line.flow_limit_mw) continue;
    const double b = line.susceptance();
    const std::vector<std::pair<int, double>> flow{{m.theta_col[line.from_bus - 1], b},
                                                   {m.theta_col[line.to_bus - 1], -b}};
    const int id = static_cast<int>(k) + 1;
    m.line_max_row[k] = lp.add_row(tag("flow_max", id), Relation::LessEqual, *line.flow_limit_mw, flow);
    m.line_min_row[k] = lp.add_row(tag("flow_min", id), Relation::GreaterEqual, -*line.flow_limit_mw, flow);
  }
  return m;
}

DispatchResult solve_opf_hour(const OpfHourInput& in) {
  const OpfModel m = build_opf(in);
  const Network& net = in.net;
  const std::size_t n = net.bus_count();
  const std::size_t nl = net.lines.size();

  DispatchResult r;
  r.hour = in.data.hour;
  r.p_gen.assign(n, 0.0);
  r.p_load.assign(n, 0.0);
  r.p_flexreq.assign(n, 0.0);
  r.theta.assign(n, 0.0);
  r.lmp.assign(n, 0.0);
  r.flow.assign(nl, 0.0);
  r.congestion_dual.assign(nl, 0.0);
  r.solution = solve(m.lp);
  r.status = r.solution.status;

  if (r.status == LpStatus::Infeasible) {
    r.message = "hour " + std::to_string(r.hour) +
                ": infeasible (firm load cannot be served within generation and line limits)";
    return r;
  }
  if (r.status == LpStatus::Unbounded) {
    r.message = "hour " + std::to_string(r.hour) + ": unbounded";
    return r;
  }

  const auto& x = r.solution.primal;
  const auto& y = r.solution.duals;
  auto value = [&x](int col) { return col >= 0 ? x[static_cast<std::size_t>(col)] : 0.0; };
  for (std::size_t i = 0; i < n; ++i) {
    r.p_gen[i] = value(m.gen_col[i]);
    r.p_load[i] = value(m.load_col[i]);
    r.p_flexreq[i] = value(m.flex_col[i]);
    r.theta[i] = value(m.theta_col[i]);
    r.lmp[i] = lmp_from_balance_dual(y[static_cast<std::size_t>(m.balance_row[i])]);
  }
  for (std::size_t k = 0; k < nl; ++k) {
    const Line& line = net.lines[k];
    r.flow[k] = line.susceptance() * (r.theta[line.from_bus - 1] - r.theta[line.to_bus - 1]);
    if (m.line_max_row[k] >= 0) {
      // <= row dual is >= 0, >= row dual is <= 0; their sum carries the direction.
      r.congestion_dual[k] = y[static_cast<std::size_t>(m.line_max_row[k])] +
                             y[static_cast<std::size_t>(m.line_min_row[k])];
    }
  }
  r.objective = r.solution.objective_value;
  r.degenerate = r.solution.degenerate;
  return r;
}

double injection_imbalance(const DispatchResult& r) {
  double sum = 0.0;
  for (std::size_t i = 0; i < r.p_gen.size(); ++i) sum += r.p_gen[i] - r.p_load[i] + r.p_flexreq[i];
  return sum;
}

}  // namespace flexhedge::opf
