#include <catch_amalgamated.hpp>

#include "support/corpus.hpp"
#include "support/fixtures.hpp"
#include "tasp/estimation.hpp"
#include "tasp/ewdg.hpp"

using tasp::EstimationCache;
using tasp::EstimatorLevel;
using tasp::PathBounds;
using tasp::ProblemInstance;
using tasp::Rational;

namespace {
bool has_violation(const tasp::ValidationResult& v, const std::string& needle) {
  for (const auto& msg : v.violations)
    if (msg.find(needle) != std::string::npos) return true;
  return false;
}
}  // namespace

TEST_CASE("the reference instance is valid") {
  CHECK(tasp::validate_instance(tasp_test::make_g_ex()).ok());
}

TEST_CASE("validation reports non-nested levels") {
  ProblemInstance inst;
  inst.name = "bad";
  inst.nodes = {"a", "b"};
  inst.source = "a";
  inst.goals = {"b"};
  inst.edges = {{"a", "b", {{Rational(2), Rational(5)}, {Rational(1), Rational(6)}}, std::nullopt}};
  const auto v = tasp::validate_instance(inst);
  CHECK_FALSE(v.ok());
  CHECK(has_violation(v, "not nested"));
}

TEST_CASE("validation reports a true cost outside the tightest interval") {
  ProblemInstance inst;
  inst.name = "bad";
  inst.nodes = {"a", "b"};
  inst.source = "a";
  inst.goals = {"b"};
  inst.edges = {{"a", "b", {{Rational(6), Rational(8)}}, Rational(9)}};
  const auto v = tasp::validate_instance(inst);
  CHECK_FALSE(v.ok());
  CHECK(has_violation(v, "true cost outside tightest interval"));
}

TEST_CASE("validation reports every structural problem at once") {
  ProblemInstance inst;
  inst.name = "bad";
  inst.nodes = {"a", "a", "b"};
  inst.source = "missing";
  inst.goals = {};
  inst.edges = {{"a", "b", {}, std::nullopt},
                {"a", "b", {{Rational(1), Rational(2)}}, std::nullopt},
                {"a", "zzz", {{Rational(2), Rational(1)}}, std::nullopt}};
  const auto v = tasp::validate_instance(inst);
  CHECK(has_violation(v, "duplicate node"));
  CHECK(has_violation(v, "is not a node"));
  CHECK(has_violation(v, "goal set is empty"));
  CHECK(has_violation(v, "no estimator levels"));
  CHECK(has_violation(v, "parallel edge"));
  CHECK(has_violation(v, "unknown head node"));
  CHECK(has_violation(v, "upper bound below lower bound"));
}

TEST_CASE("escalation walks the level ladder and counts") {
  const ProblemInstance inst = tasp_test::make_g_ex();
  EstimationCache cache(inst);

  CHECK(cache.applied_level(1) == 0);
  CHECK(cache.current_bounds(1) == EstimatorLevel{Rational(0), Rational(0)});

  CHECK(cache.apply_next(1) == EstimatorLevel{Rational(1), Rational(6)});
  CHECK(cache.apply_next(1) == EstimatorLevel{Rational(2), Rational(5)});
  CHECK(cache.at_max_level(1));
  CHECK_THROWS_AS(cache.apply_next(1), tasp::EscalationExhausted);

  CHECK(cache.apply_next(0) == EstimatorLevel{Rational(3), Rational(4)});
  CHECK_THROWS_AS(cache.apply_next(0), tasp::EscalationExhausted);

  CHECK(cache.level_count(1) == 2);
  CHECK(cache.level_count(2) == 1);
  CHECK(cache.theta_max() == 2);  // e02 level 2 and e01 level 1 are final
}

TEST_CASE("tighten_fully reaches the final level and is idempotent") {
  const ProblemInstance inst = tasp_test::make_g_ex();
  EstimationCache cache(inst);

  CHECK(cache.tighten_fully(2) == EstimatorLevel{Rational(5), Rational(6)});  // e14
  CHECK(cache.tighten_fully(0) == EstimatorLevel{Rational(3), Rational(4)});  // e01
  const long long total = cache.total_applications();
  CHECK(cache.tighten_fully(2) == EstimatorLevel{Rational(5), Rational(6)});
  CHECK(cache.total_applications() == total);
}

TEST_CASE("path bounds over the reference paths") {
  const ProblemInstance inst = tasp_test::make_g_ex();
  EstimationCache cache(inst);

  CHECK(tasp::path_bounds(cache, std::vector<int>{0, 2}) ==
        PathBounds{Rational(8), Rational(10)});
  CHECK(tasp::path_bounds(cache, std::vector<int>{1, 4}) ==
        PathBounds{Rational(7), Rational(11)});
  CHECK(tasp::path_bounds(cache, std::vector<int>{}) == PathBounds{Rational(0), Rational(0)});
  CHECK_THROWS_AS(tasp::path_bounds(cache, std::vector<int>{0, 3}), std::invalid_argument);
}

TEST_CASE("escalation tightens monotonically on generated instances") {
  for (const auto& inst : tasp_test::small_corpus(0, 1)) {
    EstimationCache cache(inst);
    for (size_t e = 0; e < inst.edges.size(); ++e) {
      EstimatorLevel prev = cache.current_bounds(static_cast<int>(e));
      bool first = true;
      while (!cache.at_max_level(static_cast<int>(e))) {
        const EstimatorLevel next = cache.apply_next(static_cast<int>(e));
        if (!first) {
          CHECK(next.l >= prev.l);
          CHECK(next.u <= prev.u);
        }
        CHECK(next.l <= next.u);
        prev = next;
        first = false;
      }
    }
    // Counter conservation: level counts sum to the applications performed.
    long long expected = 0;
    for (const auto& e : inst.edges) expected += static_cast<long long>(e.levels.size());
    CHECK(cache.total_applications() == expected);
  }
}

TEST_CASE("path bounds are additive over concatenation") {
  const ProblemInstance inst = tasp_test::make_g_ex();
  EstimationCache c1(inst), c2(inst), c3(inst);
  const std::vector<int> left{1};         // v0->v2
  const std::vector<int> right{4};        // v2->v4
  const std::vector<int> both{1, 4};
  const PathBounds a = tasp::path_bounds(c1, left);
  const PathBounds b = tasp::path_bounds(c2, right);
  const PathBounds ab = tasp::path_bounds(c3, both);
  CHECK(ab.l == a.l + b.l);
  CHECK(ab.u == a.u + b.u);
}

TEST_CASE("true costs sit inside every level of generated edges") {
  for (const auto& inst : tasp_test::small_corpus(0, 0)) {
    for (const auto& e : inst.edges) {
      REQUIRE(e.true_cost.has_value());
      for (const auto& level : e.levels) {
        CHECK(level.l <= *e.true_cost);
        CHECK(*e.true_cost <= level.u);
      }
    }
  }
}

TEST_CASE("format_path renders node chains") {
  const ProblemInstance inst = tasp_test::make_g_ex();
  CHECK(tasp::format_path(inst, std::vector<int>{0, 2}) == "v0->v1->v4");
  CHECK(tasp::format_path(inst, std::vector<int>{}) == "empty");
}
