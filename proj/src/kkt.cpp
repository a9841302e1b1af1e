#include <algorithm>
#include <cmath>

#include "flexhedge/lp.hpp"

namespace flexhedge {

KktReport verify_kkt(const LinearProgram& lp, const LpSolution& sol) {
  KktReport report;
  const auto& x = sol.primal;
  const auto& y = sol.duals;
  const auto n = static_cast<std::size_t>(lp.column_count());
  const auto m = static_cast<std::size_t>(lp.row_count());
  if (x.size() != n || y.size() != m) {
    report.stationarity = report.primal_feasibility = report.dual_feasibility =
        report.complementarity = kInf;
    return report;
  }
  // Work in maximize orientation: a minimize problem has mirrored signs.
  const double orient = lp.sense() == Sense::Maximize ? 1.0 : -1.0;

  std::vector<double> implied(n);
  for (std::size_t j = 0; j < n; ++j) implied[j] = lp.columns()[j].cost;

  for (std::size_t i = 0; i < m; ++i) {
    const LpRow& row = lp.rows()[i];
    for (const auto& [j, a] : row.coefficients) implied[static_cast<std::size_t>(j)] -= y[i] * a;

    const double activity = lp.row_activity(static_cast<int>(i), x);
    const double yi = orient * y[i];
    double infeas = 0.0;
    double sign_violation = 0.0;
    switch (row.relation) {
      case Relation::LessEqual:
        infeas = std::max(0.0, activity - row.rhs);
        sign_violation = std::max(0.0, -yi);
        break;
      case Relation::GreaterEqual:
        infeas = std::max(0.0, row.rhs - activity);
        sign_violation = std::max(0.0, yi);
        break;
      case Relation::Equal:
        infeas = std::abs(activity - row.rhs);
        break;
    }
    report.primal_feasibility = std::max(report.primal_feasibility, infeas);
    report.dual_feasibility = std::max(report.dual_feasibility, sign_violation);
    if (row.relation != Relation::Equal) {
      report.complementarity = std::max(report.complementarity, std::abs(y[i] * (row.rhs - activity)));
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    const LpColumn& col = lp.columns()[j];
    report.primal_feasibility =
        std::max({report.primal_feasibility, col.lower - x[j], x[j] - col.upper, 0.0});

    const double reported = j < sol.reduced_costs.size() ? sol.reduced_costs[j] : kInf;
    report.stationarity = std::max(report.stationarity, std::abs(implied[j] - reported));

    // g > 0 pushes the column up (needs a finite upper bound), g < 0 down.
    const double g = orient * implied[j];
    if (g > 0.0) {
      if (std::isfinite(col.upper)) {
        report.complementarity = std::max(report.complementarity, g * std::abs(col.upper - x[j]));
      } else {
        report.dual_feasibility = std::max(report.dual_feasibility, g);
      }
    } else if (g < 0.0) {
      if (std::isfinite(col.lower)) {
        report.complementarity = std::max(report.complementarity, -g * std::abs(x[j] - col.lower));
      } else {
        report.dual_feasibility = std::max(report.dual_feasibility, -g);
      }
    }
  }
  return report;
}

}  // namespace flexhedge
