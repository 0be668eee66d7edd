#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tasp/rational.hpp"

namespace tasp {

/// One estimator result: a [l, u] interval bounding the hidden edge cost.
struct EstimatorLevel {
  Rational l;
  Rational u;
  friend bool operator==(const EstimatorLevel&, const EstimatorLevel&) = default;
};

/// A directed edge with its ordered estimator sequence. Levels tighten: each
/// interval is contained in the previous one. The hidden cost, when known,
/// lies inside the tightest interval.
struct EdgeSpec {
  std::string from;
  std::string to;
  std::vector<EstimatorLevel> levels;
  std::optional<Rational> true_cost;
  friend bool operator==(const EdgeSpec&, const EdgeSpec&) = default;
};

struct ProblemInstance {
  std::string name;
  std::vector<std::string> nodes;
  std::string source;
  std::vector<std::string> goals;
  std::vector<EdgeSpec> edges;
  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

struct PathBounds {
  Rational l;
  Rational u;
  friend bool operator==(const PathBounds&, const PathBounds&) = default;
};

struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every structural invariant and reports all violations at once.
/// Violations are data, not errors: a malformed instance parses fine and
/// fails here with messages naming the offending node/edge.
inline ValidationResult validate_instance(const ProblemInstance& inst) {
  ValidationResult result;
  auto bad = [&](std::string msg) { result.violations.push_back(std::move(msg)); };

  std::unordered_set<std::string> node_set;
  for (const auto& n : inst.nodes) {
    if (n.empty()) bad("empty node id");
    if (!node_set.insert(n).second) bad("duplicate node '" + n + "'");
  }

  if (!node_set.contains(inst.source))
    bad("source '" + inst.source + "' is not a node");
  if (inst.goals.empty()) bad("goal set is empty");
  std::unordered_set<std::string> goal_set;
  for (const auto& g : inst.goals) {
    if (!node_set.contains(g)) bad("goal '" + g + "' is not a node");
    if (!goal_set.insert(g).second) bad("duplicate goal '" + g + "'");
  }

  std::unordered_set<std::string> edge_keys;
  for (size_t i = 0; i < inst.edges.size(); ++i) {
    const EdgeSpec& e = inst.edges[i];
    const std::string id = "edge " + e.from + "->" + e.to;
    if (!node_set.contains(e.from)) bad(id + ": unknown tail node");
    if (!node_set.contains(e.to)) bad(id + ": unknown head node");
    if (!edge_keys.insert(e.from + "\x1f" + e.to).second)
      bad(id + ": parallel edge");
    if (e.levels.empty()) {
      bad(id + ": no estimator levels");
      continue;
    }
    for (size_t j = 0; j < e.levels.size(); ++j) {
      const auto& lv = e.levels[j];
      const std::string lid = id + " level " + std::to_string(j + 1);
      if (lv.l.is_infinite() || lv.u.is_infinite()) bad(lid + ": infinite bound");
      if (lv.l < Rational(0)) bad(lid + ": negative lower bound");
      if (lv.u < lv.l) bad(lid + ": upper bound below lower bound");
      if (j > 0) {
        const auto& prev = e.levels[j - 1];
        if (lv.l < prev.l || lv.u > prev.u) bad(lid + ": levels not nested");
      }
    }
    if (e.true_cost) {
      const auto& tight = e.levels.back();
      if (*e.true_cost < Rational(0)) bad(id + ": negative true cost");
      else if (*e.true_cost < tight.l || *e.true_cost > tight.u)
        bad(id + ": true cost outside tightest interval");
    }
  }
  return result;
}

/// Node/edge index over a structurally sound instance. Successor edges keep
/// declaration order, which fixes every iteration order in the search and
/// oracle code.
class GraphIndex {
 public:
  explicit GraphIndex(const ProblemInstance& inst) : inst_(&inst) {
    node_index_.reserve(inst.nodes.size());
    for (size_t i = 0; i < inst.nodes.size(); ++i) {
      if (!node_index_.emplace(inst.nodes[i], static_cast<int>(i)).second)
        throw std::invalid_argument("duplicate node '" + inst.nodes[i] + "'");
    }
    out_edges_.resize(inst.nodes.size());
    edge_from_.reserve(inst.edges.size());
    edge_to_.reserve(inst.edges.size());
    for (size_t e = 0; e < inst.edges.size(); ++e) {
      const int from = node_id_or_throw(inst.edges[e].from);
      const int to = node_id_or_throw(inst.edges[e].to);
      edge_from_.push_back(from);
      edge_to_.push_back(to);
      out_edges_[from].push_back(static_cast<int>(e));
    }
    source_ = node_id_or_throw(inst.source);
    is_goal_.assign(inst.nodes.size(), false);
    for (const auto& g : inst.goals) is_goal_[node_id_or_throw(g)] = true;
  }

  const ProblemInstance& instance() const { return *inst_; }
  int node_count() const { return static_cast<int>(inst_->nodes.size()); }
  int edge_count() const { return static_cast<int>(inst_->edges.size()); }
  const std::string& node_name(int v) const { return inst_->nodes[v]; }
  int node_id(const std::string& name) const {
    auto it = node_index_.find(name);
    return it == node_index_.end() ? -1 : it->second;
  }
  const std::vector<int>& out_edges(int v) const { return out_edges_[v]; }
  int edge_from(int e) const { return edge_from_[e]; }
  int edge_to(int e) const { return edge_to_[e]; }
  int source() const { return source_; }
  bool is_goal(int v) const { return is_goal_[v]; }

 private:
  int node_id_or_throw(const std::string& name) const {
    auto it = node_index_.find(name);
    if (it == node_index_.end())
      throw std::invalid_argument("unknown node '" + name + "'");
    return it->second;
  }

  const ProblemInstance* inst_;
  std::unordered_map<std::string, int> node_index_;
  std::vector<std::vector<int>> out_edges_;
  std::vector<int> edge_from_;
  std::vector<int> edge_to_;
  int source_ = -1;
  std::vector<bool> is_goal_;
};

/// True iff consecutive edges chain head-to-tail. Empty paths are contiguous.
inline bool path_contiguous(const ProblemInstance& inst, std::span<const int> path) {
  for (size_t i = 0; i + 1 < path.size(); ++i)
    if (inst.edges[path[i]].to != inst.edges[path[i + 1]].from) return false;
  return true;
}

/// Renders a path as its node chain, e.g. "v0->v1->v4"; "empty" for none.
inline std::string format_path(const ProblemInstance& inst, std::span<const int> path) {
  if (path.empty()) return "empty";
  std::string out = inst.edges[path.front()].from;
  for (int e : path) {
    out += "->";
    out += inst.edges[e].to;
  }
  return out;
}

/// Sums of the final-level bounds along a path (no cache, no instrumentation);
/// the oracle-side counterpart of the cache-aware path_bounds.
inline PathBounds tight_path_bounds(const ProblemInstance& inst, std::span<const int> path) {
  if (!path_contiguous(inst, path))
    throw std::invalid_argument("path is not contiguous");
  PathBounds pb{Rational(0), Rational(0)};
  for (int e : path) {
    const auto& tight = inst.edges[e].levels.back();
    pb.l += tight.l;
    pb.u += tight.u;
  }
  return pb;
}

}  // namespace tasp
