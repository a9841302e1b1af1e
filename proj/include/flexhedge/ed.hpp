#pragma once

#include <optional>

#include "flexhedge/lp.hpp"
#include "flexhedge/model.hpp"

namespace flexhedge::ed {

// Single-bus economic dispatch and its price-capped counterparts.
//
// Column and row names used by the builders:
//   primal: columns "p_gen", "p_load" (and "p_flexreq"), row "balance"
//   dual:   columns "balance", "ub:p_gen", "ub:p_load", "lb:p_load",
//           rows "p_gen", "p_load", and "lmp_cap" when a cap is present

struct EdInstance {
  GenOffer offer;
  LoadUtility utility;
  std::optional<double> cap;  // maximum willingness to pay, EUR/MWh
};

struct EdResult {
  double p_gen = 0.0;
  double p_load = 0.0;
  double p_flexreq = 0.0;
  double lambda = 0.0;    // EUR/MWh paid by the load
  double mu_lower = 0.0;  // >= 0, multiplier of p_load >= p_min
  double mu_upper = 0.0;  // >= 0, multiplier of p_load <= p_max
  double objective = 0.0;
};

/// One solved program of the chain, kept for auditing.
struct SolvedProgram {
  LinearProgram lp;
  LpSolution solution;
};

struct EdChainReport {
  EdResult result;                // from the flexibility primal (or the plain primal without a cap)
  SolvedProgram primal;           // welfare maximization
  SolvedProgram dual;             // mechanical dual, with lambda <= cap when capped
  SolvedProgram flex_primal;      // primal with the flexibility column
  double lambda_unconstrained = 0.0;
  double objective_primal = 0.0;  // NaN when the plain primal is infeasible
  double objective_dual = 0.0;
  double objective_flex = 0.0;
  double gap_primal_dual = 0.0;
  double gap_dual_flex = 0.0;
  double gap_primal_flex = 0.0;
  double max_gap = 0.0;           // largest of the finite pairwise gaps
  bool cap_binding = false;       // flexibility was dispatched
  bool degenerate = false;        // tie or degenerate vertex; lambda may be one of several valid prices
};

/// maximize b*p_load - a*p_gen + (c_load - c_gen)
/// s.t. p_gen - p_load = 0, p_load in [p_min, p_max], p_gen in [0, capacity].
LinearProgram build_primal(const EdInstance& inst);

/// Dual of build_primal, plus the row lambda <= cap when a cap is set.
LinearProgram build_dual(const EdInstance& inst);

/// Primal with the flexibility column priced at the cap. Throws InvalidInput
/// without a cap.
LinearProgram build_flex_primal(const EdInstance& inst);

/// Solve all three programs and compare them. Throws InvalidInput for an
/// invalid instance and SolverFailure when the governing program (flex primal
/// if capped, plain primal otherwise) is not optimal.
EdChainReport solve_chain(const EdInstance& inst);

/// Extract EdResult from a solved primal or flex primal.
EdResult extract_result(const LinearProgram& lp, const LpSolution& sol);

}  // namespace flexhedge::ed
