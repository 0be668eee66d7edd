#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tasp/ewdg.hpp"

namespace tasp {

/// The six multipliers of the three-level estimator scheme:
/// lower bounds c*f1 <= c*f2 <= c*f3, upper bounds c*f4 <= c*f5 <= c*f6,
/// with f3 < f4 so the tightest interval is non-degenerate around the
/// hidden cost.
struct FactorConfig {
  int f1, f2, f3, f4, f5, f6;
  friend bool operator==(const FactorConfig&, const FactorConfig&) = default;
};

enum class Topology { layered_dag, grid, random_digraph };

struct GenSpec {
  Topology topology = Topology::layered_dag;
  int node_count = 2;
  int layers = 2;          // layered_dag only
  double density = 1.0;    // layered_dag and random_digraph, in (0, 1]
  long long cost_max = 10; // base costs drawn from [1, cost_max]
  int seed = 0;            // estimator-configuration seed, in [0, 26]
  std::uint64_t rng_seed = 0;  // topology/base-cost randomness
};

struct BareEdge {
  int from;
  int to;
  long long c_old;
};

struct BareDigraph {
  int node_count = 0;
  std::vector<BareEdge> edges;
  int source = 0;
  std::vector<int> goals;
};

/// SplitMix64 stream; the sole randomness source of the generator, so a
/// GenSpec maps to one instance byte-for-byte on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Unbiased draw from [0, bound); rejection sampling on the top range.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }

  /// Bernoulli(p) via a fixed-point threshold on one draw.
  bool chance(double p) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return next() < static_cast<std::uint64_t>(p * 18446744073709551616.0);
  }

 private:
  std::uint64_t state_;
};

/// Decodes hash = (c_old + seed) mod 27 into one of the 27 factor
/// configurations: the three base-3 digits of the hash offset the lower and
/// upper factors symmetrically, so every fi lands in its scheme set
/// (f1 in {1,2,3}, f2 in {f1..f1+2}, f3 in {f2..f2+2}, f4 in {f3+1..f3+3},
/// f5 in {f4..f4+2}, f6 in {f5..f5+2}).
inline FactorConfig hash_config(long long c_old, int seed) {
  if (c_old < 1) throw std::invalid_argument("c_old must be positive");
  const int h = static_cast<int>((c_old + seed) % 27);
  const int d0 = h % 3;
  const int d1 = (h / 3) % 3;
  const int d2 = (h / 9) % 3;
  FactorConfig cfg{};
  cfg.f1 = 1 + d0;
  cfg.f2 = cfg.f1 + d1;
  cfg.f3 = cfg.f2 + d2;
  cfg.f4 = cfg.f3 + 1 + d0;
  cfg.f5 = cfg.f4 + d1;
  cfg.f6 = cfg.f5 + d2;
  return cfg;
}

struct EdgeEstimates {
  std::vector<EstimatorLevel> levels;
  Rational true_cost;
};

/// Three nested levels over a base cost: (c*f1, c*f6), (c*f2, c*f5),
/// (c*f3, c*f4). The hidden cost sits at the midpoint of the tightest
/// interval, which keeps containment exact at every level.
inline EdgeEstimates synthesize_estimators(long long c_old, const FactorConfig& cfg) {
  if (c_old < 1) throw std::invalid_argument("c_old must be positive");
  EdgeEstimates out;
  out.levels = {
      EstimatorLevel{Rational(c_old * cfg.f1), Rational(c_old * cfg.f6)},
      EstimatorLevel{Rational(c_old * cfg.f2), Rational(c_old * cfg.f5)},
      EstimatorLevel{Rational(c_old * cfg.f3), Rational(c_old * cfg.f4)},
  };
  out.true_cost = Rational(c_old * (cfg.f3 + cfg.f4), 2);
  return out;
}

namespace gen_detail {

inline void check_spec(const GenSpec& spec) {
  if (spec.node_count < 2) throw std::invalid_argument("node_count must be >= 2");
  if (spec.cost_max < 1) throw std::invalid_argument("cost_max must be >= 1");
  if (spec.seed < 0 || spec.seed > 26)
    throw std::invalid_argument("seed must be in [0, 26]");
  switch (spec.topology) {
    case Topology::layered_dag:
      if (spec.layers < 2 || spec.layers > spec.node_count)
        throw std::invalid_argument("layers must be in [2, node_count]");
      if (!(spec.density > 0.0) || spec.density > 1.0)
        throw std::invalid_argument("density must be in (0, 1]");
      break;
    case Topology::grid: {
      const int side = static_cast<int>(std::lround(std::sqrt(double(spec.node_count))));
      if (side < 2 || side * side != spec.node_count)
        throw std::invalid_argument("grid node_count must be a perfect square >= 4");
      break;
    }
    case Topology::random_digraph:
      if (!(spec.density > 0.0) || spec.density > 1.0)
        throw std::invalid_argument("density must be in (0, 1]");
      break;
  }
}

inline BareDigraph layered_dag(const GenSpec& spec, SplitMix64& rng) {
  BareDigraph g;
  g.node_count = spec.node_count;
  const int layers = spec.layers;
  std::vector<std::vector<int>> layer(layers);
  const int base = spec.node_count / layers;
  const int extra = spec.node_count % layers;
  int next_node = 0;
  for (int j = 0; j < layers; ++j) {
    const int size = base + (j < extra ? 1 : 0);
    for (int i = 0; i < size; ++i) layer[j].push_back(next_node++);
  }
  g.source = layer.front().front();
  g.goals = layer.back();

  for (int j = 0; j + 1 < layers; ++j) {
    std::vector<bool> has_in(layer[j + 1].size(), false);
    for (int u : layer[j]) {
      bool has_out = false;
      for (size_t vi = 0; vi < layer[j + 1].size(); ++vi) {
        if (rng.chance(spec.density)) {
          g.edges.push_back({u, layer[j + 1][vi], 0});
          has_out = true;
          has_in[vi] = true;
        }
      }
      if (!has_out) {
        const size_t vi = rng.next_below(layer[j + 1].size());
        g.edges.push_back({u, layer[j + 1][vi], 0});
        has_in[vi] = true;
      }
    }
    for (size_t vi = 0; vi < layer[j + 1].size(); ++vi) {
      if (!has_in[vi]) {
        const int u = layer[j][rng.next_below(layer[j].size())];
        g.edges.push_back({u, layer[j + 1][vi], 0});
      }
    }
  }
  return g;
}

inline BareDigraph grid(const GenSpec& spec) {
  BareDigraph g;
  g.node_count = spec.node_count;
  const int side = static_cast<int>(std::lround(std::sqrt(double(spec.node_count))));
  auto at = [side](int r, int c) { return r * side + c; };
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      if (c + 1 < side) g.edges.push_back({at(r, c), at(r, c + 1), 0});
      if (r + 1 < side) g.edges.push_back({at(r, c), at(r + 1, c), 0});
    }
  }
  g.source = 0;
  g.goals = {spec.node_count - 1};
  return g;
}

inline BareDigraph random_digraph(const GenSpec& spec, SplitMix64& rng) {
  BareDigraph g;
  g.node_count = spec.node_count;
  for (int i = 0; i < spec.node_count; ++i)
    for (int j = 0; j < spec.node_count; ++j)
      if (i != j && rng.chance(spec.density)) g.edges.push_back({i, j, 0});
  g.source = 0;
  g.goals = {spec.node_count - 1};
  return g;
}

inline std::string density_text(double d) {
  std::ostringstream ss;
  ss << d;
  return ss.str();
}

}  // namespace gen_detail

/// Bare topology plus base costs; estimator synthesis happens on top.
/// Deterministic for a fixed spec: one SplitMix64 stream drives edge
/// selection, then a second pass draws c_old per edge in declaration order.
inline BareDigraph gen_topology(const GenSpec& spec) {
  gen_detail::check_spec(spec);
  SplitMix64 rng(spec.rng_seed);
  BareDigraph g;
  switch (spec.topology) {
    case Topology::layered_dag: g = gen_detail::layered_dag(spec, rng); break;
    case Topology::grid: g = gen_detail::grid(spec); break;
    case Topology::random_digraph: g = gen_detail::random_digraph(spec, rng); break;
  }
  for (auto& e : g.edges)
    e.c_old = 1 + static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(spec.cost_max)));
  return g;
}

inline std::string topology_name(Topology t) {
  switch (t) {
    case Topology::layered_dag: return "layered";
    case Topology::grid: return "grid";
    case Topology::random_digraph: return "random";
  }
  return "unknown";
}

inline std::string instance_name(const GenSpec& spec) {
  std::string name = topology_name(spec.topology) + "-n" + std::to_string(spec.node_count);
  if (spec.topology == Topology::layered_dag)
    name += "-l" + std::to_string(spec.layers);
  if (spec.topology != Topology::grid)
    name += "-d" + gen_detail::density_text(spec.density);
  name += "-c" + std::to_string(spec.cost_max) + "-r" + std::to_string(spec.rng_seed) +
          "-s" + std::to_string(spec.seed);
  return name;
}

/// Full pipeline: topology, then per edge the hash-selected factor
/// configuration and the synthesized levels. Edges with equal base cost get
/// identical estimates under the same seed.
inline ProblemInstance generate_instance(const GenSpec& spec) {
  const BareDigraph g = gen_topology(spec);
  ProblemInstance inst;
  inst.name = instance_name(spec);
  inst.nodes.reserve(g.node_count);
  for (int i = 0; i < g.node_count; ++i) inst.nodes.push_back("v" + std::to_string(i));
  inst.source = inst.nodes[g.source];
  for (int goal : g.goals) inst.goals.push_back(inst.nodes[goal]);
  inst.edges.reserve(g.edges.size());
  for (const BareEdge& e : g.edges) {
    EdgeEstimates est = synthesize_estimators(e.c_old, hash_config(e.c_old, spec.seed));
    EdgeSpec edge;
    edge.from = inst.nodes[e.from];
    edge.to = inst.nodes[e.to];
    edge.levels = std::move(est.levels);
    edge.true_cost = est.true_cost;
    inst.edges.push_back(std::move(edge));
  }
  return inst;
}

}  // namespace tasp
