#pragma once

#include "tasp/ewdg.hpp"

namespace tasp_test {

// Five-node reference instance used across the suites. Edge indices:
// 0: v0->v1, 1: v0->v2, 2: v1->v4, 3: v2->v3, 4: v2->v4.
// Ground truth: L* = 7 via <v0,v2,v4>, U* = 10 via <v0,v1,v4>, B* = 10/7.
inline tasp::ProblemInstance make_g_ex() {
  using tasp::EstimatorLevel;
  using tasp::Rational;
  tasp::ProblemInstance inst;
  inst.name = "g_ex";
  inst.nodes = {"v0", "v1", "v2", "v3", "v4"};
  inst.source = "v0";
  inst.goals = {"v3", "v4"};
  inst.edges = {
      {"v0", "v1", {{Rational(3), Rational(4)}}, Rational(3)},
      {"v0", "v2", {{Rational(1), Rational(6)}, {Rational(2), Rational(5)}}, Rational(4)},
      {"v1", "v4", {{Rational(1), Rational(7)}, {Rational(5), Rational(6)}}, Rational(6)},
      {"v2", "v3", {{Rational(7), Rational(9)}, {Rational(7), Rational(8)}}, Rational(8)},
      {"v2", "v4", {{Rational(5), Rational(6)}}, Rational(6)},
  };
  return inst;
}

// Two routes merging into the goal; the second edge into it has two levels
// and the lazy u-side search abandons it after the cheap one.
inline tasp::ProblemInstance make_merge_fixture() {
  using tasp::EstimatorLevel;
  using tasp::Rational;
  tasp::ProblemInstance inst;
  inst.name = "merge";
  inst.nodes = {"a", "b", "c"};
  inst.source = "a";
  inst.goals = {"c"};
  inst.edges = {
      {"a", "c", {{Rational(1), Rational(2)}}, Rational(2)},
      {"a", "b", {{Rational(1), Rational(1)}}, Rational(1)},
      {"b", "c", {{Rational(5), Rational(9)}, {Rational(6), Rational(8)}}, Rational(7)},
  };
  return inst;
}

inline tasp::ProblemInstance make_no_solution_fixture() {
  using tasp::Rational;
  tasp::ProblemInstance inst;
  inst.name = "disconnected";
  inst.nodes = {"a", "b", "c"};
  inst.source = "a";
  inst.goals = {"c"};
  inst.edges = {
      {"a", "b", {{Rational(1), Rational(2)}}, std::nullopt},
  };
  return inst;
}

// L* = 0 < U*: no finite admissibility factor can be certified.
inline tasp::ProblemInstance make_zero_lower_fixture() {
  using tasp::Rational;
  tasp::ProblemInstance inst;
  inst.name = "zero_lower";
  inst.nodes = {"a", "b"};
  inst.source = "a";
  inst.goals = {"b"};
  inst.edges = {
      {"a", "b", {{Rational(0), Rational(5)}}, Rational(2)},
  };
  return inst;
}

}  // namespace tasp_test
