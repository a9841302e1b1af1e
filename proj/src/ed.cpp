#include "flexhedge/ed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "flexhedge/errors.hpp"

namespace flexhedge::ed {

namespace {

void check(const EdInstance& inst) {
  const auto& o = inst.offer;
  const auto& u = inst.utility;
  std::string why;
  if (!(o.capacity_mw >= 0.0)) why = "capacity must be >= 0";
  else if (!(u.p_min_mw >= 0.0) || !std::isfinite(u.p_max_mw)) why = "load bounds must be finite and >= 0";
  else if (u.p_min_mw > u.p_max_mw) why = "load bounds inverted";
  else if (!(o.marginal_cost >= 0.0)) why = "marginal cost must be >= 0";
  else if (inst.cap && !(*inst.cap >= 0.0)) why = "cap must be >= 0";
  if (!why.empty()) throw InvalidInput("economic dispatch instance: " + why);
}

double gap(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(a - b);
}

SolvedProgram solve_program(LinearProgram lp) {
  LpSolution sol = solve(lp);
  return {std::move(lp), std::move(sol)};
}

}  // namespace

LinearProgram build_primal(const EdInstance& inst) {
  LinearProgram lp(Sense::Maximize);
  const int gen = lp.add_column("p_gen", 0.0, inst.offer.capacity_mw, -inst.offer.marginal_cost);
  const int load = lp.add_column("p_load", inst.utility.p_min_mw, inst.utility.p_max_mw,
                                 inst.utility.marginal_utility);
  lp.add_row("balance", Relation::Equal, 0.0, {{gen, 1.0}, {load, -1.0}});
  lp.set_objective_constant(inst.utility.constant_utility - inst.offer.constant_cost);
  return lp;
}

LinearProgram build_dual(const EdInstance& inst) {
  LinearProgram dual = dualize(build_primal(inst));
  if (inst.cap) {
    // lambda = -(balance dual), so lambda <= cap reads -y <= cap.
    const int y = *dual.find_column("balance");
    dual.add_row("lmp_cap", Relation::LessEqual, *inst.cap, {{y, -1.0}});
  }
  return dual;
}

LinearProgram build_flex_primal(const EdInstance& inst) {
  if (!inst.cap) throw InvalidInput("build_flex_primal: instance has no price cap");
  LinearProgram lp = build_primal(inst);
  const int flex = lp.add_column("p_flexreq", 0.0, kInf, -*inst.cap);
  lp.add_coefficient(*lp.find_row("balance"), flex, 1.0);
  return lp;
}

EdResult extract_result(const LinearProgram& lp, const LpSolution& sol) {
  if (!sol.optimal()) throw InvalidInput("extract_result: solution is not optimal");
  EdResult r;
  r.p_gen = primal_of(sol, "p_gen");
  r.p_load = primal_of(sol, "p_load");
  if (lp.find_column("p_flexreq")) r.p_flexreq = primal_of(sol, "p_flexreq");
  r.lambda = lmp_from_balance_dual(dual_of(sol, "balance"));
  const double rc = sol.reduced_costs.at(static_cast<std::size_t>(*lp.find_column("p_load")));
  r.mu_upper = std::max(0.0, rc);
  r.mu_lower = std::max(0.0, -rc);
  r.objective = sol.objective_value;
  return r;
}

EdChainReport solve_chain(const EdInstance& inst) {
  check(inst);
  EdChainReport rep;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  rep.primal = solve_program(build_primal(inst));
  rep.dual = solve_program(build_dual(inst));
  rep.flex_primal = inst.cap ? solve_program(build_flex_primal(inst)) : rep.primal;

  const SolvedProgram& governing = inst.cap ? rep.flex_primal : rep.primal;
  if (!governing.solution.optimal()) {
    throw SolverFailure(std::string("economic dispatch: governing program is ") +
                        to_string(governing.solution.status));
  }
  rep.result = extract_result(governing.lp, governing.solution);

  rep.objective_primal = rep.primal.solution.optimal() ? rep.primal.solution.objective_value : nan;
  rep.objective_dual = rep.dual.solution.optimal() ? rep.dual.solution.objective_value : nan;
  rep.objective_flex = rep.flex_primal.solution.objective_value;
  rep.lambda_unconstrained =
      rep.primal.solution.optimal() ? lmp_from_balance_dual(dual_of(rep.primal.solution, "balance")) : nan;

  rep.gap_primal_dual = gap(rep.objective_primal, rep.objective_dual);
  rep.gap_dual_flex = gap(rep.objective_dual, rep.objective_flex);
  rep.gap_primal_flex = gap(rep.objective_primal, rep.objective_flex);
  rep.max_gap = 0.0;
  for (double g : {rep.gap_primal_dual, rep.gap_dual_flex, rep.gap_primal_flex}) {
    if (std::isfinite(g)) rep.max_gap = std::max(rep.max_gap, g);
  }

  rep.cap_binding = rep.result.p_flexreq > 1e-9;
  rep.degenerate = rep.primal.solution.degenerate || rep.flex_primal.solution.degenerate ||
                   (inst.cap && std::isfinite(rep.lambda_unconstrained) &&
                    std::abs(*inst.cap - rep.lambda_unconstrained) <= 1e-9);
  return rep;
}

}  // namespace flexhedge::ed
