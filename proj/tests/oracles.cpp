#include "oracles.hpp"

#include <cmath>
#include <numeric>

namespace oracle {

using flexhedge::kInf;

namespace {

void append_row(Eigen::MatrixXd& m, Eigen::VectorXd& v, const Eigen::RowVectorXd& row, double rhs) {
  const auto r = m.rows();
  m.conservativeResize(r + 1, row.size());
  v.conservativeResize(r + 1);
  m.row(r) = row;
  v(r) = rhs;
}

bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::optional<VertexOptimum> enumerate_vertices(const ExplicitLp& lp, double tol) {
  const int n = lp.n();
  const int m_eq = static_cast<int>(lp.a_eq.rows());
  const int m_in = static_cast<int>(lp.g.rows());
  const int k = n - m_eq;
  if (k < 0 || k > m_in) return std::nullopt;

  std::optional<VertexOptimum> best;
  int visited = 0;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  Eigen::MatrixXd sys(n, n);
  Eigen::VectorXd rhs(n);
  if (m_eq > 0) {
    sys.topRows(m_eq) = lp.a_eq;
    rhs.head(m_eq) = lp.b_eq;
  }
  do {
    for (int i = 0; i < k; ++i) {
      sys.row(m_eq + i) = lp.g.row(idx[i]);
      rhs(m_eq + i) = lp.h(idx[i]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd x = lu.solve(rhs);
    if (m_eq > 0 && ((lp.a_eq * x - lp.b_eq).cwiseAbs().maxCoeff() > tol)) continue;
    if (m_in > 0 && ((lp.g * x - lp.h).maxCoeff() > tol)) continue;
    ++visited;
    const double obj = lp.c.dot(x) + lp.c0;
    if (!best || obj > best->objective) best = VertexOptimum{obj, x, 0};
  } while (k > 0 && next_combination(idx, m_in));
  if (best) best->vertices = visited;
  return best;
}

ExplicitLp to_explicit(const flexhedge::LinearProgram& lp) {
  const int n = lp.column_count();
  const double orient = lp.sense() == flexhedge::Sense::Maximize ? 1.0 : -1.0;
  ExplicitLp e;
  e.a_eq.resize(0, n);
  e.g.resize(0, n);
  e.c.resize(n);
  for (int j = 0; j < n; ++j) e.c(j) = orient * lp.columns()[j].cost;
  e.c0 = orient * lp.objective_constant();
  for (int i = 0; i < lp.row_count(); ++i) {
    const auto& row = lp.rows()[i];
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
    for (const auto& [j, v] : row.coefficients) r(j) += v;
    switch (row.relation) {
      case flexhedge::Relation::Equal: append_row(e.a_eq, e.b_eq, r, row.rhs); break;
      case flexhedge::Relation::LessEqual: append_row(e.g, e.h, r, row.rhs); break;
      case flexhedge::Relation::GreaterEqual: append_row(e.g, e.h, -r, -row.rhs); break;
    }
  }
  for (int j = 0; j < n; ++j) {
    const auto& col = lp.columns()[j];
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
    r(j) = 1.0;
    if (col.lower == col.upper) {
      append_row(e.a_eq, e.b_eq, r, col.lower);
      continue;
    }
    if (std::isfinite(col.upper)) append_row(e.g, e.h, r, col.upper);
    if (std::isfinite(col.lower)) append_row(e.g, e.h, -r, -col.lower);
  }
  return e;
}

std::optional<double> brute_force_objective(const flexhedge::LinearProgram& lp) {
  const auto best = enumerate_vertices(to_explicit(lp));
  if (!best) return std::nullopt;
  return lp.sense() == flexhedge::Sense::Maximize ? best->objective : -best->objective;
}

ExplicitLp opf_explicit(const flexhedge::Network& net, const flexhedge::HourlyMarketData& data,
                        const std::vector<flexhedge::PriceCap>& caps, const std::vector<double>& withdrawal) {
  using namespace flexhedge;
  const int nb = static_cast<int>(net.bus_count());
  const BusId slack = net.slack_bus();

  // Variable layout: offers, utilities, caps, then angles of non-slack buses.
  std::vector<int> theta(static_cast<std::size_t>(nb) + 1, -1);
  const int n_off = static_cast<int>(data.offers.size());
  const int n_util = static_cast<int>(data.utilities.size());
  const int n_cap = static_cast<int>(caps.size());
  int n = n_off + n_util + n_cap;
  for (BusId b = 1; b <= nb; ++b) {
    if (b != slack) theta[b] = n++;
  }

  ExplicitLp e;
  e.c = Eigen::VectorXd::Zero(n);
  e.a_eq = Eigen::MatrixXd::Zero(nb, n);
  e.b_eq = Eigen::VectorXd::Zero(nb);
  e.g.resize(0, n);

  auto unit = [n](int j, double v) {
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
    r(j) = v;
    return r;
  };

  for (int k = 0; k < n_off; ++k) {
    const GenOffer& o = data.offers[k];
    e.c(k) = -o.marginal_cost;
    e.c0 -= o.constant_cost;
    e.a_eq(o.bus - 1, k) += 1.0;
    append_row(e.g, e.h, unit(k, -1.0), 0.0);
    if (std::isfinite(o.capacity_mw)) append_row(e.g, e.h, unit(k, 1.0), o.capacity_mw);
  }
  for (int k = 0; k < n_util; ++k) {
    const LoadUtility& u = data.utilities[k];
    const int j = n_off + k;
    e.c(j) = u.marginal_utility;
    e.c0 += u.constant_utility;
    e.a_eq(u.bus - 1, j) -= 1.0;
    append_row(e.g, e.h, unit(j, -1.0), -u.p_min_mw);
    append_row(e.g, e.h, unit(j, 1.0), u.p_max_mw);
  }
  for (int k = 0; k < n_cap; ++k) {
    const int j = n_off + n_util + k;
    e.c(j) = -caps[k].at(data.hour);
    e.a_eq(caps[k].bus - 1, j) += 1.0;
    append_row(e.g, e.h, unit(j, -1.0), 0.0);
  }
  for (const Line& line : net.lines) {
    // flow = (theta_from - theta_to) / x leaves `from` and enters `to`.
    Eigen::RowVectorXd flow = Eigen::RowVectorXd::Zero(n);
    if (theta[line.from_bus] >= 0) flow(theta[line.from_bus]) += line.susceptance();
    if (theta[line.to_bus] >= 0) flow(theta[line.to_bus]) -= line.susceptance();
    e.a_eq.row(line.from_bus - 1) -= flow;
    e.a_eq.row(line.to_bus - 1) += flow;
    if (line.flow_limit_mw) {
      append_row(e.g, e.h, flow, *line.flow_limit_mw);
      append_row(e.g, e.h, -flow, *line.flow_limit_mw);
    }
  }
  for (int b = 0; b < nb && b < static_cast<int>(withdrawal.size()); ++b) e.b_eq(b) = withdrawal[b];
  return e;
}

std::optional<OpfOracle> opf_oracle(const flexhedge::Network& net, const flexhedge::HourlyMarketData& data,
                                    const std::vector<flexhedge::PriceCap>& caps, double eps) {
  const auto base = enumerate_vertices(opf_explicit(net, data, caps));
  if (!base) return std::nullopt;
  OpfOracle out;
  out.objective = base->objective;
  const std::size_t nb = net.bus_count();
  for (std::size_t b = 0; b < nb; ++b) {
    std::vector<double> w(nb, 0.0);
    w[b] = eps;
    const auto up = enumerate_vertices(opf_explicit(net, data, caps, w));
    w[b] = -eps;
    const auto down = enumerate_vertices(opf_explicit(net, data, caps, w));
    if (!up || !down) {
      out.lmp.push_back(std::nan(""));
      out.lmp_unique.push_back(false);
      continue;
    }
    const double right = -(up->objective - base->objective) / eps;
    const double left = -(base->objective - down->objective) / eps;
    out.lmp.push_back(0.5 * (left + right));
    out.lmp_unique.push_back(std::abs(left - right) <= 1e-6 * (1.0 + std::abs(right)));
  }
  return out;
}

}  // namespace oracle
