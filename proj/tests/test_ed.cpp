#include <cmath>
#include <random>

#include "doctest.h"
#include "flexhedge/ed.hpp"
#include "flexhedge/errors.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace flexhedge;
using ed::EdInstance;

namespace {

EdInstance instance(double a, double b, double p_min, double p_max, double capacity = kInf,
                    std::optional<double> cap = std::nullopt) {
  return {{1, a, 0.0, capacity}, {1, b, 0.0, p_min, p_max}, cap};
}

void check_kkt(const ed::EdChainReport& rep) {
  for (const ed::SolvedProgram* p : {&rep.primal, &rep.dual, &rep.flex_primal}) {
    if (p->solution.optimal()) CHECK(verify_kkt(p->lp, p->solution).passes(1e-6));
  }
}

}  // namespace

TEST_SUITE("ed") {

TEST_CASE("no trade when utility is below cost") {
  const auto inst = instance(80, 75, 0.0, 1.0);
  const LinearProgram lp = ed::build_primal(inst);
  const auto oracle = oracle::brute_force_objective(lp);
  const auto rep = ed::solve_chain(inst);
  REQUIRE(oracle.has_value());
  CHECK(rep.objective_primal == doctest::Approx(*oracle));
  CHECK(rep.result.p_load == doctest::Approx(0.0));
  CHECK(rep.result.p_gen == doctest::Approx(0.0));
  CHECK(rep.result.lambda >= 75.0 - 1e-9);
  CHECK(rep.result.lambda <= 80.0 + 1e-9);
  check_kkt(rep);
}

TEST_CASE("marginal generator sets the price") {
  const auto rep = ed::solve_chain(instance(50, 80, 0.2, 1.0));
  CHECK(rep.result.p_load == doctest::Approx(1.0));
  CHECK(rep.result.p_gen == doctest::Approx(1.0));
  CHECK(rep.result.lambda == doctest::Approx(50.0));
  CHECK(rep.result.mu_upper == doctest::Approx(30.0));  // b - a on the active upper bound
  CHECK(rep.result.mu_lower == doctest::Approx(0.0));
  check_kkt(rep);
}

TEST_CASE("fixed zero load") {
  const auto rep = ed::solve_chain(instance(50, 80, 0.0, 0.0));
  CHECK(rep.objective_primal == doctest::Approx(0.0));
  CHECK(rep.result.p_gen == doctest::Approx(0.0));
}

TEST_CASE("binding lower bound") {
  const auto rep = ed::solve_chain(instance(80, 50, 0.4, 1.0));
  CHECK(rep.result.p_load == doctest::Approx(0.4));
  CHECK(rep.result.lambda == doctest::Approx(80.0));
  CHECK(rep.result.mu_lower == doctest::Approx(30.0));
  CHECK(rep.objective_primal == doctest::Approx(0.4 * (50 - 80)));
}

TEST_CASE("without a cap the three programs coincide") {
  const auto rep = ed::solve_chain(instance(50, 80, 0.2, 1.0, 3.0));
  CHECK(rep.max_gap == doctest::Approx(0.0));
  CHECK(rep.objective_dual == doctest::Approx(rep.objective_primal));
  CHECK(rep.objective_flex == doctest::Approx(rep.objective_primal));
  CHECK_FALSE(rep.cap_binding);
  CHECK_THROWS_AS(ed::build_flex_primal(instance(50, 80, 0.2, 1.0)), InvalidInput);
}

TEST_CASE("slack cap leaves the optimum alone") {
  const auto plain = ed::solve_chain(instance(50, 80, 0.2, 1.0));
  const auto capped = ed::solve_chain(instance(50, 80, 0.2, 1.0, kInf, 60.0));
  CHECK(capped.objective_dual == doctest::Approx(plain.objective_primal));
  CHECK(capped.result.p_flexreq == doctest::Approx(0.0));
  CHECK(capped.result.lambda == doctest::Approx(plain.result.lambda));
  const auto& dual = capped.dual.solution;
  CHECK(dual_of(dual, "lmp_cap") == doctest::Approx(0.0));
}

TEST_CASE("binding cap: dual and flexibility primal agree") {
  const auto inst = instance(80, 75, 0.0, 1.0, kInf, 70.0);
  const auto rep = ed::solve_chain(inst);
  CHECK(rep.objective_dual == doctest::Approx(rep.objective_flex));
  CHECK(rep.gap_dual_flex <= 1e-6);
  const auto oracle = oracle::brute_force_objective(ed::build_flex_primal(inst));
  REQUIRE(oracle.has_value());
  CHECK(rep.objective_flex == doctest::Approx(*oracle));
  CHECK(rep.result.lambda <= 70.0 + 1e-6);
  check_kkt(rep);
}

TEST_CASE("capped program is a relaxation of the plain one") {
  // P_flex = 0 is feasible in the capped primal, so it can only do better.
  const auto rep = ed::solve_chain(instance(80, 75, 0.0, 1.0, kInf, 70.0));
  CHECK(rep.objective_primal == doctest::Approx(0.0));
  CHECK(rep.objective_flex == doctest::Approx(5.0));
  CHECK(rep.objective_flex >= rep.objective_primal - 1e-9);
}

TEST_CASE("cap below cost with fixed load is served by flexibility") {
  const auto inst = instance(80, 90, 1.0, 1.0, kInf, 70.0);
  const auto rep = ed::solve_chain(inst);
  CHECK(rep.result.p_flexreq == doctest::Approx(1.0));
  CHECK(rep.result.p_gen == doctest::Approx(0.0));
  CHECK(rep.result.lambda == doctest::Approx(70.0));
  CHECK(rep.cap_binding);
  CHECK(rep.lambda_unconstrained == doctest::Approx(80.0));
  const auto oracle = oracle::brute_force_objective(ed::build_flex_primal(inst));
  REQUIRE(oracle.has_value());
  CHECK(rep.objective_flex == doctest::Approx(*oracle));
}

TEST_CASE("no generation capacity: flexibility covers the load") {
  const auto rep = ed::solve_chain(instance(50, 90, 1.0, 1.0, 0.0, 70.0));
  CHECK(rep.result.p_flexreq == doctest::Approx(1.0));
  CHECK(rep.result.lambda == doctest::Approx(70.0));
  CHECK(std::isnan(rep.objective_primal));  // plain primal infeasible
}

TEST_CASE("infeasible uncapped instance is a solver failure") {
  CHECK_THROWS_AS(ed::solve_chain(instance(50, 90, 1.0, 1.0, 0.5)), SolverFailure);
  CHECK_THROWS_AS(ed::solve_chain(instance(50, 90, 1.0, 0.5)), InvalidInput);
}

TEST_CASE("dual program layout") {
  const LinearProgram d = ed::build_dual(instance(50, 80, 0.2, 1.0, 3.0, 70.0));
  CHECK(d.sense() == Sense::Minimize);
  CHECK(d.find_column("balance").has_value());
  CHECK(d.find_column("ub:p_gen").has_value());
  CHECK(d.find_column("ub:p_load").has_value());
  CHECK(d.find_column("lb:p_load").has_value());
  CHECK(d.find_row("lmp_cap").has_value());
  CHECK(d.find_row("p_gen").has_value());
}

TEST_CASE("constant terms shift every objective equally") {
  EdInstance inst = instance(50, 80, 0.2, 1.0, kInf, 60.0);
  const auto base = ed::solve_chain(inst);
  inst.offer.constant_cost = 4.0;
  inst.utility.constant_utility = 10.0;
  const auto shifted = ed::solve_chain(inst);
  CHECK(shifted.objective_primal == doctest::Approx(base.objective_primal + 6.0));
  CHECK(shifted.objective_dual == doctest::Approx(base.objective_dual + 6.0));
  CHECK(shifted.objective_flex == doctest::Approx(base.objective_flex + 6.0));
  CHECK(shifted.result.lambda == doctest::Approx(base.result.lambda));
}

TEST_CASE("random instances: strong duality, relaxation order and oracle agreement") {
  std::mt19937_64 rng(100);
  for (int seed = 0; seed < 100; ++seed) {
    CAPTURE(seed);
    const EdInstance inst = support::random_ed(rng, seed % 2 == 0);
    const auto rep = ed::solve_chain(inst);
    check_kkt(rep);
    if (!std::isnan(rep.objective_primal)) {
      const auto oracle = oracle::brute_force_objective(rep.primal.lp);
      REQUIRE(oracle.has_value());
      CHECK(rep.objective_primal == doctest::Approx(*oracle).epsilon(1e-9));
      CHECK(rep.objective_flex >= rep.objective_primal - 1e-6);
    }
    CHECK(rep.gap_dual_flex <= 1e-6 * (1.0 + std::abs(rep.objective_flex)));
    if (inst.cap) {
      CHECK(rep.result.lambda <= *inst.cap + 1e-6);
      CHECK(rep.cap_binding == (rep.result.p_flexreq > 1e-9));
    } else {
      CHECK(rep.gap_primal_dual <= 1e-6 * (1.0 + std::abs(rep.objective_primal)));
    }
    CHECK(rep.result.mu_lower >= 0.0);
    CHECK(rep.result.mu_upper >= 0.0);
  }
}

}
