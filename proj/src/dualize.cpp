#include <cmath>

#include "flexhedge/lp.hpp"

namespace flexhedge {

LinearProgram dualize(const LinearProgram& lp) {
  const bool maximize = lp.sense() == Sense::Maximize;
  const double orient = maximize ? 1.0 : -1.0;
  LinearProgram dual(maximize ? Sense::Minimize : Sense::Maximize);
  dual.set_objective_constant(lp.objective_constant());

  // One dual row per primal column.
  for (const LpColumn& col : lp.columns()) {
    Relation rel = Relation::Equal;
    if (col.lower == 0.0) rel = maximize ? Relation::GreaterEqual : Relation::LessEqual;
    dual.add_row(col.name, rel, col.cost);
  }

  // Row multipliers.
  for (int i = 0; i < lp.row_count(); ++i) {
    const LpRow& row = lp.rows()[static_cast<std::size_t>(i)];
    double lo = -kInf;
    double hi = kInf;
    if (row.relation == Relation::LessEqual) (maximize ? lo : hi) = 0.0;
    if (row.relation == Relation::GreaterEqual) (maximize ? hi : lo) = 0.0;
    const int y = dual.add_column(row.name, lo, hi, row.rhs);
    for (const auto& [j, a] : row.coefficients) dual.add_coefficient(j, y, a);
  }

  // Bound multipliers.
  for (int j = 0; j < lp.column_count(); ++j) {
    const LpColumn& col = lp.columns()[static_cast<std::size_t>(j)];
    if (std::isfinite(col.upper)) {
      const int w = dual.add_column("ub:" + col.name, maximize ? 0.0 : -kInf, maximize ? kInf : 0.0,
                                    col.upper);
      dual.add_coefficient(j, w, 1.0);
    }
    if (std::isfinite(col.lower) && col.lower != 0.0) {
      const int v = dual.add_column("lb:" + col.name, 0.0, kInf, -orient * col.lower);
      dual.add_coefficient(j, v, -orient);
    }
  }
  return dual;
}

}  // namespace flexhedge
