#include <catch_amalgamated.hpp>

#include <array>
#include <set>

#include "support/corpus.hpp"
#include "tasp/instance_gen.hpp"
#include "tasp/instance_io.hpp"
#include "tasp/search.hpp"

using tasp::FactorConfig;
using tasp::GenSpec;
using tasp::Rational;
using tasp::Topology;

TEST_CASE("hash decoding hits the documented configurations") {
  CHECK(tasp::hash_config(27, 0) == FactorConfig{1, 1, 1, 2, 2, 2});
  CHECK(tasp::hash_config(3, 0) == FactorConfig{1, 2, 2, 3, 4, 4});
  CHECK(tasp::hash_config(1, 25) == FactorConfig{3, 5, 7, 10, 12, 14});
  CHECK(tasp::hash_config(1, 0) == tasp::hash_config(28, 0));
  CHECK(tasp::hash_config(1, 2) == tasp::hash_config(3, 0));
}

TEST_CASE("every factor stays inside its scheme set") {
  for (long long c_old = 1; c_old <= 200; ++c_old) {
    for (int seed : {0, 5, 13, 26}) {
      const FactorConfig f = tasp::hash_config(c_old, seed);
      CHECK(f.f1 >= 1);
      CHECK(f.f1 <= 3);
      CHECK(f.f2 - f.f1 >= 0);
      CHECK(f.f2 - f.f1 <= 2);
      CHECK(f.f3 - f.f2 >= 0);
      CHECK(f.f3 - f.f2 <= 2);
      CHECK(f.f4 - f.f3 >= 1);
      CHECK(f.f4 - f.f3 <= 3);
      CHECK(f.f5 - f.f4 >= 0);
      CHECK(f.f5 - f.f4 <= 2);
      CHECK(f.f6 - f.f5 >= 0);
      CHECK(f.f6 - f.f5 <= 2);
    }
  }
}

TEST_CASE("all 27 hash values map to distinct configurations") {
  std::set<std::array<int, 6>> configs;
  for (long long c_old = 1; c_old <= 27; ++c_old) {
    const FactorConfig f = tasp::hash_config(c_old, 0);
    configs.insert({f.f1, f.f2, f.f3, f.f4, f.f5, f.f6});
  }
  CHECK(configs.size() == 27);
}

TEST_CASE("estimator synthesis from a factor configuration") {
  const auto a = tasp::synthesize_estimators(2, FactorConfig{1, 2, 3, 4, 5, 6});
  REQUIRE(a.levels.size() == 3);
  CHECK(a.levels[0] == tasp::EstimatorLevel{Rational(2), Rational(12)});
  CHECK(a.levels[1] == tasp::EstimatorLevel{Rational(4), Rational(10)});
  CHECK(a.levels[2] == tasp::EstimatorLevel{Rational(6), Rational(8)});
  CHECK(a.true_cost == Rational(7));

  const auto b = tasp::synthesize_estimators(1, FactorConfig{1, 1, 1, 2, 2, 2});
  CHECK(b.levels[0] == tasp::EstimatorLevel{Rational(1), Rational(2)});
  CHECK(b.levels[1] == tasp::EstimatorLevel{Rational(1), Rational(2)});
  CHECK(b.levels[2] == tasp::EstimatorLevel{Rational(1), Rational(2)});
  CHECK(b.true_cost == Rational(3, 2));
}

TEST_CASE("generated instances always validate") {
  for (const auto& inst : tasp_test::small_corpus(0, 2))
    CHECK(tasp::validate_instance(inst).ok());
}

TEST_CASE("equal base costs get equal estimates under one seed") {
  GenSpec spec;
  spec.topology = Topology::layered_dag;
  spec.node_count = 10;
  spec.layers = 3;
  spec.density = 1.0;
  spec.cost_max = 1;  // every edge shares c_old = 1
  spec.seed = 7;
  const auto inst = tasp::generate_instance(spec);
  REQUIRE(!inst.edges.empty());
  for (const auto& e : inst.edges) {
    CHECK(e.levels == inst.edges[0].levels);
    CHECK(e.true_cost == inst.edges[0].true_cost);
  }
}

TEST_CASE("seeds vary estimates over a fixed topology") {
  GenSpec spec;
  spec.topology = Topology::layered_dag;
  spec.node_count = 9;
  spec.layers = 3;
  spec.density = 0.8;
  spec.cost_max = 10;
  spec.rng_seed = 3;

  std::set<std::string> documents;
  std::vector<std::pair<std::string, std::string>> first_topology;
  for (int seed = 0; seed <= 26; ++seed) {
    spec.seed = seed;
    const auto inst = tasp::generate_instance(spec);
    std::vector<std::pair<std::string, std::string>> topology;
    for (const auto& e : inst.edges) topology.push_back({e.from, e.to});
    if (seed == 0)
      first_topology = topology;
    else
      CHECK(topology == first_topology);  // only estimator configs vary
    documents.insert(tasp::serialize_instance(inst));
  }
  CHECK(documents.size() == 27);
}

TEST_CASE("generation is byte-deterministic") {
  GenSpec spec;
  spec.topology = Topology::layered_dag;
  spec.node_count = 6;
  spec.layers = 3;
  spec.density = 0.5;
  spec.rng_seed = 7;
  CHECK(tasp::serialize_instance(tasp::generate_instance(spec)) ==
        tasp::serialize_instance(tasp::generate_instance(spec)));
}

TEST_CASE("grid topology shape") {
  GenSpec spec;
  spec.topology = Topology::grid;
  spec.node_count = 9;
  const auto g = tasp::gen_topology(spec);
  CHECK(g.node_count == 9);
  CHECK(g.edges.size() == 12);  // right and down edges of a 3x3 lattice
  CHECK(g.source == 0);
  CHECK(g.goals == std::vector<int>{8});
  for (const auto& e : g.edges) CHECK((e.to == e.from + 1 || e.to == e.from + 3));
}

TEST_CASE("parameter validation") {
  GenSpec spec;
  spec.topology = Topology::random_digraph;
  spec.node_count = 5;
  spec.density = 0.0;
  CHECK_THROWS_AS(tasp::gen_topology(spec), std::invalid_argument);
  spec.density = 0.5;
  spec.node_count = 1;
  CHECK_THROWS_AS(tasp::gen_topology(spec), std::invalid_argument);
  spec.node_count = 5;
  spec.seed = 27;
  CHECK_THROWS_AS(tasp::generate_instance(spec), std::invalid_argument);
  spec.seed = 0;
  spec.cost_max = 0;
  CHECK_THROWS_AS(tasp::gen_topology(spec), std::invalid_argument);

  GenSpec grid;
  grid.topology = Topology::grid;
  grid.node_count = 8;  // not a perfect square
  CHECK_THROWS_AS(tasp::gen_topology(grid), std::invalid_argument);

  GenSpec layered;
  layered.topology = Topology::layered_dag;
  layered.node_count = 4;
  layered.layers = 5;
  CHECK_THROWS_AS(tasp::gen_topology(layered), std::invalid_argument);
}

TEST_CASE("layered instances always reach a goal") {
  for (const auto& family : tasp_test::small_families()) {
    if (family.topology != Topology::layered_dag) continue;
    GenSpec spec = family;
    spec.seed = 11;
    const auto inst = tasp::generate_instance(spec);
    CHECK(tasp::ei_ucs(inst).status == tasp::SolveStatus::found);
  }
}

TEST_CASE("instance names encode the generating parameters") {
  GenSpec spec;
  spec.topology = Topology::layered_dag;
  spec.node_count = 12;
  spec.layers = 4;
  spec.density = 0.6;
  spec.cost_max = 10;
  spec.rng_seed = 3;
  spec.seed = 14;
  CHECK(tasp::instance_name(spec) == "layered-n12-l4-d0.6-c10-r3-s14");
}
