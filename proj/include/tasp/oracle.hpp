#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tasp/ewdg.hpp"

namespace tasp {

class InstanceTooLarge : public std::runtime_error {
 public:
  explicit InstanceTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct OracleLimits {
  int max_nodes = 14;
};

/// Exhaustive-enumeration ground truth for small instances.
/// Simple paths suffice: bounds are non-negative, so dropping a cycle never
/// increases a path's bound sums, and some simple path attains each minimum.
struct OracleResult {
  Rational l_star = Rational::infinity();
  Rational u_star = Rational::infinity();
  Rational b_star = Rational::infinity();
  std::optional<std::vector<int>> slb_witness;
  std::optional<std::vector<int>> sub_witness;
  bool solvable = false;
};

namespace oracle_detail {

inline void check_limit(const ProblemInstance& inst, const OracleLimits& limits) {
  if (static_cast<int>(inst.nodes.size()) > limits.max_nodes)
    throw InstanceTooLarge("instance has " + std::to_string(inst.nodes.size()) +
                           " nodes, oracle limit is " + std::to_string(limits.max_nodes));
}

inline void dfs(const GraphIndex& g, int node, std::vector<int>& path,
                std::vector<bool>& on_path,
                const std::function<void(const std::vector<int>&)>& emit) {
  if (g.is_goal(node)) emit(path);
  for (int e : g.out_edges(node)) {
    const int next = g.edge_to(e);
    if (on_path[next]) continue;
    on_path[next] = true;
    path.push_back(e);
    dfs(g, next, path, on_path, emit);
    path.pop_back();
    on_path[next] = false;
  }
}

}  // namespace oracle_detail

/// Visits every simple source-to-goal path exactly once, in lexicographic
/// edge-declaration order. A source that is itself a goal yields the empty
/// path first.
inline void for_each_simple_path(const ProblemInstance& inst, const OracleLimits& limits,
                                 const std::function<void(const std::vector<int>&)>& emit) {
  oracle_detail::check_limit(inst, limits);
  GraphIndex g(inst);
  std::vector<int> path;
  std::vector<bool> on_path(inst.nodes.size(), false);
  on_path[g.source()] = true;
  oracle_detail::dfs(g, g.source(), path, on_path, emit);
}

inline std::vector<std::vector<int>> enumerate_simple_paths(
    const ProblemInstance& inst, const OracleLimits& limits = {}) {
  std::vector<std::vector<int>> paths;
  for_each_simple_path(inst, limits, [&](const std::vector<int>& p) { paths.push_back(p); });
  return paths;
}

/// B* from L* and U*: 1 when the bounds meet (no uncertainty, even at 0),
/// infinity when no positive lower bound exists to certify any factor.
inline Rational combine_bstar(const Rational& l_star, const Rational& u_star) {
  if (l_star > u_star) throw std::domain_error("combine_bstar: l_star > u_star");
  if (l_star == u_star) return l_star.is_infinite() ? Rational::infinity() : Rational(1);
  if (l_star == Rational(0)) return Rational::infinity();
  return u_star / l_star;
}

inline OracleResult oracle_solve(const ProblemInstance& inst, const OracleLimits& limits = {}) {
  OracleResult result;
  for_each_simple_path(inst, limits, [&](const std::vector<int>& p) {
    const PathBounds pb = tight_path_bounds(inst, p);
    result.solvable = true;
    if (pb.l < result.l_star) {
      result.l_star = pb.l;
      result.slb_witness = p;
    }
    if (pb.u < result.u_star) {
      result.u_star = pb.u;
      result.sub_witness = p;
    }
  });
  if (result.solvable) result.b_star = combine_bstar(result.l_star, result.u_star);
  return result;
}

inline std::pair<Rational, std::optional<std::vector<int>>> oracle_slb(
    const ProblemInstance& inst, const OracleLimits& limits = {}) {
  const OracleResult r = oracle_solve(inst, limits);
  return {r.l_star, r.slb_witness};
}

inline std::pair<Rational, std::optional<std::vector<int>>> oracle_sub(
    const ProblemInstance& inst, const OracleLimits& limits = {}) {
  const OracleResult r = oracle_solve(inst, limits);
  return {r.u_star, r.sub_witness};
}

/// True iff the path's tight upper bound is within factor B of the best
/// provable lower bound L*.
inline bool check_admissible(const ProblemInstance& inst, const std::vector<int>& path,
                             const Rational& bound_factor, const OracleLimits& limits = {}) {
  GraphIndex g(inst);
  if (!path_contiguous(inst, path))
    throw std::invalid_argument("invalid path: not contiguous");
  const int start = path.empty() ? g.source() : g.edge_from(path.front());
  const int end = path.empty() ? g.source() : g.edge_to(path.back());
  if (start != g.source())
    throw std::invalid_argument("invalid path: does not start at the source");
  if (!g.is_goal(end))
    throw std::invalid_argument("invalid path: does not end at a goal");
  const PathBounds pb = tight_path_bounds(inst, path);
  const auto [l_star, witness] = oracle_slb(inst, limits);
  return pb.u <= l_star * bound_factor;
}

}  // namespace tasp
