#include <cmath>
#include <sstream>

#include "doctest.h"
#include "flexhedge/ed.hpp"
#include "flexhedge/errors.hpp"
#include "flexhedge/opf.hpp"
#include "flexhedge/scenario.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace flexhedge;

namespace {

opf::DispatchResult solve_hour(const Network& net, const HourlyMarketData& d, const std::vector<PriceCap>& caps = {}) {
  return opf::solve_opf_hour({net, d, caps, !caps.empty()});
}

void check_kkt(const Network& net, const HourlyMarketData& d, const std::vector<PriceCap>& caps,
               const opf::DispatchResult& r) {
  const opf::OpfModel m = opf::build_opf({net, d, caps, !caps.empty()});
  CHECK(verify_kkt(m.lp, r.solution).passes(1e-6));
}

double line_flow(const Network& net, const opf::DispatchResult& r, BusId a, BusId b) {
  const std::size_t k = *net.line_between(a, b);
  return net.lines[k].from_bus == a ? r.flow[k] : -r.flow[k];
}

}  // namespace

TEST_SUITE("opf") {

TEST_CASE("triangle with finite limits has the expected rows") {
  const Network net = support::triangle(0.6, 1.0);
  const auto d = support::triangle_hour(1, 60, 40, 50, 0.5, 1.0);
  const opf::OpfModel m = opf::build_opf({net, d, {}, false});
  CHECK(m.lp.row_count() == 3 + 1 + 6);
  CHECK(m.balance_row.size() == 3);
  CHECK(m.angle_row >= 0);
  CHECK(m.lp.structural_errors().empty());
}

TEST_CASE("unbounded lines add no flow rows") {
  const opf::OpfModel m = opf::build_opf({support::triangle(), support::triangle_hour(1, 60, 40, 50, 0.5, 1.0), {}, false});
  CHECK(m.lp.row_count() == 3 + 1);
}

TEST_CASE("single bus reduces to economic dispatch") {
  Network net = support::single_bus();
  HourlyMarketData d;
  d.offers = {{1, 50.0, 1.0, 3.0}};
  d.utilities = {{1, 80.0, 2.0, 0.2, 1.0}};
  const auto r = solve_hour(net, d);
  const auto e = ed::solve_chain({d.offers[0], d.utilities[0], std::nullopt});
  REQUIRE(r.optimal());
  CHECK(r.objective == doctest::Approx(e.objective_primal));
  CHECK(r.lmp_at(1) == doctest::Approx(e.result.lambda));
  CHECK(r.load_at(1) == doctest::Approx(e.result.p_load));

  const opf::OpfModel m = opf::build_opf({net, d, {}, false});
  const LinearProgram p = ed::build_primal({d.offers[0], d.utilities[0], std::nullopt});
  CHECK(m.lp.column_count() == p.column_count() + 1);  // plus the slack angle
  CHECK(m.lp.row_count() == p.row_count() + 1);
}

TEST_CASE("flexibility column sits only at the capped bus") {
  const Network net = support::triangle();
  const auto d = support::triangle_hour(1, 80, 40, 90, 1.0, 1.0);
  const std::vector<PriceCap> caps{PriceCap::flat(3, 70)};
  const opf::OpfModel m = opf::build_opf({net, d, caps, true});
  const opf::OpfModel plain = opf::build_opf({net, d, {}, false});
  CHECK(m.lp.column_count() == plain.lp.column_count() + 1);
  const int f = m.flex_col[2];
  REQUIRE(f >= 0);
  CHECK(m.flex_col[0] == -1);
  CHECK(m.flex_col[1] == -1);
  CHECK(m.lp.columns()[f].cost == doctest::Approx(-70.0));
  for (int i = 0; i < m.lp.row_count(); ++i) {
    CHECK((m.lp.coefficient(i, f) != 0.0) == (i == m.balance_row[2]));
  }
}

TEST_CASE("caps with flexibility disabled are rejected") {
  const Network net = support::triangle();
  const auto d = support::triangle_hour(1, 80, 40, 90, 1.0, 1.0);
  const std::vector<PriceCap> caps{PriceCap::flat(3, 70)};
  CHECK_THROWS_AS(opf::build_opf({net, d, caps, false}), InvalidInput);
  HourlyMarketData bad = d;
  bad.utilities[0].p_min_mw = 5.0;
  CHECK_THROWS_AS(opf::build_opf({net, bad, {}, false}), InvalidInput);
}

TEST_CASE("uncongested triangle prices uniformly at the import cost") {
  const Network net = support::triangle(1.0, 1.0);
  const auto d = support::triangle_hour(9, 72.5, 45.0, 60.0, 1.05, 1.10);
  const auto r = solve_hour(net, d);
  REQUIRE(r.optimal());
  for (BusId b = 1; b <= 3; ++b) CHECK(r.lmp_at(b) == doctest::Approx(72.5));
  CHECK(r.gen_at(2) == doctest::Approx(0.7));  // cheap local generation first
  CHECK(r.load_at(3) == doctest::Approx(1.05));
  CHECK(opf::injection_imbalance(r) == doctest::Approx(0.0).epsilon(1e-9));
  check_kkt(net, d, {}, r);
}

TEST_CASE("congested line splits prices") {
  const Network net = support::triangle(0.6, 1.0);
  const auto d = support::triangle_hour(18, 76.9, 45.0, 60.0, 1.30, 1.35);
  const auto r = solve_hour(net, d);
  REQUIRE(r.optimal());
  const double f23 = line_flow(net, r, 2, 3);
  CHECK(f23 == doctest::Approx(0.6));
  // Two paths to bus 3: lambda_3 = 2 a_trans - a_dist, lambda_3 - lambda_2 = 2 mu / 3.
  CHECK(r.lmp_at(1) == doctest::Approx(76.9));
  CHECK(r.lmp_at(3) == doctest::Approx(2 * 76.9 - 45.0));
  const double mu = r.congestion_dual[*net.line_between(2, 3)];
  CHECK(mu > 0.0);
  CHECK(r.lmp_at(3) - r.lmp_at(2) == doctest::Approx(2.0 * mu / 3.0));
  check_kkt(net, d, {}, r);
}

TEST_CASE("cap bounds the price at the capped bus") {
  const Network net = support::triangle(0.6, 1.0);
  const auto d = support::triangle_hour(18, 76.9, 45.0, 60.0, 1.30, 1.35);
  const std::vector<PriceCap> caps{PriceCap::flat(3, 70)};
  const auto r = solve_hour(net, d, caps);
  REQUIRE(r.optimal());
  CHECK(r.lmp_at(3) <= 70.0 + 1e-6);
  CHECK(r.flex_at(3) > 0.0);
  CHECK(opf::injection_imbalance(r) == doctest::Approx(0.0).epsilon(1e-9));
  check_kkt(net, d, caps, r);
}

TEST_CASE("zero load gives zero dispatch") {
  const Network net = support::triangle(0.6, 1.0);
  auto d = support::triangle_hour(3, 50, 30, 40, 0.0, 0.0);
  d.offers[0].constant_cost = 2.0;
  d.utilities[0].constant_utility = 5.0;
  const auto r = solve_hour(net, d);
  REQUIRE(r.optimal());
  for (double f : r.flow) CHECK(f == doctest::Approx(0.0));
  for (double g : r.p_gen) CHECK(g == doctest::Approx(0.0));
  CHECK(r.objective == doctest::Approx(3.0));
}

TEST_CASE("unreachable firm load is reported, not thrown") {
  const Network net = support::triangle(0.1, 0.1);
  const auto d = support::triangle_hour(5, 60, 40, 50, 1.0, 1.0);
  const auto r = solve_hour(net, d);
  CHECK(r.status == LpStatus::Infeasible);
  CHECK(r.message.find("hour 5") != std::string::npos);
}

TEST_CASE("flows match angle differences and conserve power") {
  const Network net = support::triangle(0.6, 1.0);
  const auto d = support::triangle_hour(18, 76.9, 45.0, 60.0, 1.30, 1.35);
  const auto r = solve_hour(net, d);
  for (std::size_t k = 0; k < net.lines.size(); ++k) {
    const Line& l = net.lines[k];
    CHECK(r.flow[k] == doctest::Approx((r.theta[l.from_bus - 1] - r.theta[l.to_bus - 1]) / l.reactance_pu));
  }
  for (BusId b = 1; b <= 3; ++b) {
    double net_out = 0.0;
    for (std::size_t k = 0; k < net.lines.size(); ++k) {
      if (net.lines[k].from_bus == b) net_out += r.flow[k];
      if (net.lines[k].to_bus == b) net_out -= r.flow[k];
    }
    CHECK(r.gen_at(b) - r.load_at(b) + r.flex_at(b) == doctest::Approx(net_out).epsilon(1e-9));
  }
  CHECK(r.theta[0] == 0.0);
}

TEST_CASE("parallel and serial series agree") {
  for (const auto lc : {scenario::LineLimitCase::infinite(), scenario::LineLimitCase::finite()}) {
    const auto sc = scenario::generate_scenario(scenario::paper_3bus_spec(lc, 7));
    const std::vector<PriceCap> caps{PriceCap::flat(3, 70)};
    for (bool flex : {false, true}) {
      const std::span<const PriceCap> c = flex ? std::span<const PriceCap>(caps) : std::span<const PriceCap>();
      const auto par = opf::solve_opf_series(sc.net, sc.hours, c, flex);
      const auto ser = opf::solve_opf_series_serial(sc.net, sc.hours, c, flex);
      REQUIRE(par.size() == 24);
      for (std::size_t h = 0; h < 24; ++h) {
        CHECK(par[h].hour == static_cast<int>(h) + 1);
        CHECK(par[h].lmp == ser[h].lmp);
        CHECK(par[h].p_gen == ser[h].p_gen);
        CHECK(par[h].solution == ser[h].solution);
      }
    }
  }
}

TEST_CASE("identical hours give identical results") {
  const Network net = support::triangle(0.6, 1.0);
  std::vector<HourlyMarketData> series;
  for (int h = 1; h <= 24; ++h) series.push_back(support::triangle_hour(h, 76.9, 45.0, 60.0, 1.30, 1.35));
  const auto res = opf::solve_opf_series(net, series, {}, false);
  for (const auto& r : res) {
    CHECK(r.lmp == res[0].lmp);
    CHECK(r.flow == res[0].flow);
  }
}

TEST_CASE("dispatch CSV round trip") {
  const auto sc = scenario::generate_scenario(scenario::paper_3bus_spec(scenario::LineLimitCase::finite(), 7));
  auto results = opf::solve_opf_series(sc.net, sc.hours, {}, false);
  results[4].status = LpStatus::Infeasible;
  results[4].message = "hour 5: infeasible, for testing";
  std::stringstream ss;
  opf::write_dispatch_csv(ss, sc.net, results);
  const std::string first = ss.str();
  const auto back = opf::read_dispatch_csv(ss);
  REQUIRE(back.size() == results.size());
  for (std::size_t h = 0; h < results.size(); ++h) {
    CHECK(back[h].hour == results[h].hour);
    CHECK(back[h].status == results[h].status);
    if (!results[h].optimal()) {
      CHECK(back[h].message == results[h].message);
      continue;
    }
    CHECK(back[h].lmp == results[h].lmp);
    CHECK(back[h].flow == results[h].flow);
    CHECK(back[h].congestion_dual == results[h].congestion_dual);
    CHECK(back[h].theta == results[h].theta);
  }
  std::ostringstream again;
  opf::write_dispatch_csv(again, sc.net, back);
  CHECK(again.str() == first);
}

TEST_CASE("small networks agree with the vertex-enumeration oracle") {
  const Network net = support::triangle(0.6, 1.0);
  for (const auto& d : {support::triangle_hour(18, 76.9, 45.0, 60.0, 1.30, 1.35),
                        support::triangle_hour(9, 72.5, 45.0, 60.0, 1.05, 1.10)}) {
    for (const std::vector<PriceCap>& caps : {std::vector<PriceCap>{}, std::vector<PriceCap>{PriceCap::flat(3, 70)}}) {
      const auto r = solve_hour(net, d, caps);
      const auto o = oracle::opf_oracle(net, d, caps);
      REQUIRE(o.has_value());
      CHECK(r.objective == doctest::Approx(o->objective).epsilon(1e-9));
      for (BusId b = 1; b <= 3; ++b) {
        if (o->lmp_unique[b - 1]) CHECK(r.lmp_at(b) == doctest::Approx(o->lmp[b - 1]).epsilon(1e-6));
      }
    }
  }
}

}
