#include <catch_amalgamated.hpp>

#include "support/classic_dijkstra.hpp"
#include "support/corpus.hpp"
#include "support/fixtures.hpp"
#include "tasp/oracle.hpp"

using tasp::OracleResult;
using tasp::ProblemInstance;
using tasp::Rational;

TEST_CASE("simple-path enumeration on the reference instance") {
  const auto paths = tasp::enumerate_simple_paths(tasp_test::make_g_ex());
  REQUIRE(paths.size() == 3);
  CHECK(paths[0] == std::vector<int>{0, 2});  // v0->v1->v4
  CHECK(paths[1] == std::vector<int>{1, 3});  // v0->v2->v3
  CHECK(paths[2] == std::vector<int>{1, 4});  // v0->v2->v4
}

TEST_CASE("enumeration of unreachable goals is empty") {
  CHECK(tasp::enumerate_simple_paths(tasp_test::make_no_solution_fixture()).empty());
}

TEST_CASE("a source that is a goal yields one empty path") {
  ProblemInstance inst;
  inst.name = "self";
  inst.nodes = {"a"};
  inst.source = "a";
  inst.goals = {"a"};
  const auto paths = tasp::enumerate_simple_paths(inst);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].empty());
  const OracleResult r = tasp::oracle_solve(inst);
  CHECK(r.l_star == Rational(0));
  CHECK(r.u_star == Rational(0));
  CHECK(r.b_star == Rational(1));
}

TEST_CASE("oracle values on the reference instance") {
  const OracleResult r = tasp::oracle_solve(tasp_test::make_g_ex());
  CHECK(r.l_star == Rational(7));
  CHECK(r.u_star == Rational(10));
  CHECK(r.b_star == Rational(10, 7));
  REQUIRE(r.slb_witness.has_value());
  REQUIRE(r.sub_witness.has_value());
  CHECK(*r.slb_witness == std::vector<int>{1, 4});
  CHECK(*r.sub_witness == std::vector<int>{0, 2});
}

TEST_CASE("oracle on an unsolvable instance") {
  const OracleResult r = tasp::oracle_solve(tasp_test::make_no_solution_fixture());
  CHECK_FALSE(r.solvable);
  CHECK(r.l_star.is_infinite());
  CHECK(r.u_star.is_infinite());
  CHECK(r.b_star.is_infinite());
  CHECK_FALSE(r.slb_witness.has_value());
}

TEST_CASE("combine_bstar cases") {
  CHECK(tasp::combine_bstar(Rational(7), Rational(10)) == Rational(10, 7));
  CHECK(tasp::combine_bstar(Rational(0), Rational(5)).is_infinite());
  CHECK(tasp::combine_bstar(Rational(0), Rational(0)) == Rational(1));
  CHECK(tasp::combine_bstar(Rational(4), Rational(4)) == Rational(1));
  CHECK_THROWS_AS(tasp::combine_bstar(Rational(5), Rational(4)), std::domain_error);
}

TEST_CASE("admissibility checks against the derived factor") {
  const ProblemInstance inst = tasp_test::make_g_ex();
  CHECK(tasp::check_admissible(inst, {0, 2}, Rational(10, 7)));   // 10 <= 7 * 10/7
  CHECK_FALSE(tasp::check_admissible(inst, {0, 2}, Rational(1)));  // 10 > 7
  CHECK(tasp::check_admissible(inst, {1, 4}, Rational(2)));        // 11 <= 14
  CHECK_THROWS_AS(tasp::check_admissible(inst, {0, 3}, Rational(2)), std::invalid_argument);
  CHECK_THROWS_AS(tasp::check_admissible(inst, {2}, Rational(2)), std::invalid_argument);
}

TEST_CASE("the oracle refuses oversized instances") {
  tasp::OracleLimits limits;
  limits.max_nodes = 4;
  CHECK_THROWS_AS(tasp::oracle_solve(tasp_test::make_g_ex(), limits), tasp::InstanceTooLarge);
  limits.max_nodes = 5;
  CHECK_NOTHROW(tasp::oracle_solve(tasp_test::make_g_ex(), limits));
}

TEST_CASE("witnesses are optimal and ties resolve to enumeration order") {
  for (const auto& inst : tasp_test::small_corpus(0, 1)) {
    const OracleResult r = tasp::oracle_solve(inst);
    if (!r.solvable) continue;
    bool l_seen = false, u_seen = false;
    tasp::for_each_simple_path(inst, {}, [&](const std::vector<int>& p) {
      const tasp::PathBounds pb = tasp::tight_path_bounds(inst, p);
      CHECK(pb.l >= r.l_star);
      CHECK(pb.u >= r.u_star);
      if (!l_seen && pb.l == r.l_star) {
        CHECK(p == *r.slb_witness);
        l_seen = true;
      }
      if (!u_seen && pb.u == r.u_star) {
        CHECK(p == *r.sub_witness);
        u_seen = true;
      }
    });
    CHECK(l_seen);
    CHECK(u_seen);
  }
}

TEST_CASE("bound chain holds on instances with hidden costs") {
  // c(pi) <= u(pi) for every solution path, and L* lower-bounds the
  // cheapest hidden solution cost.
  for (const auto& inst : tasp_test::small_corpus(0, 0)) {
    const OracleResult r = tasp::oracle_solve(inst);
    if (!r.solvable) continue;
    Rational best_true = Rational::infinity();
    tasp::for_each_simple_path(inst, {}, [&](const std::vector<int>& p) {
      Rational true_cost(0);
      for (int e : p) true_cost += *inst.edges[e].true_cost;
      const tasp::PathBounds pb = tasp::tight_path_bounds(inst, p);
      CHECK(pb.l <= true_cost);
      CHECK(true_cost <= pb.u);
      if (true_cost < best_true) best_true = true_cost;
    });
    CHECK(r.l_star <= best_true);
    CHECK(best_true <= r.u_star);
  }
}

TEST_CASE("exact single-estimator instances degenerate to classic search") {
  for (const auto& inst : tasp_test::exact_corpus(40)) {
    const auto classic = tasp_test::classic_shortest_path(inst);
    const OracleResult r = tasp::oracle_solve(inst);
    if (!classic) {
      CHECK_FALSE(r.solvable);
      continue;
    }
    CHECK(r.l_star == *classic);
    CHECK(r.u_star == *classic);
    CHECK(r.b_star == Rational(1));
  }
}
