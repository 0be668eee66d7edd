#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "tasp/ewdg.hpp"

namespace tasp {

/// Thrown when an edge with no estimators left is escalated; callers guard
/// with levels_remaining().
class EscalationExhausted : public std::logic_error {
 public:
  explicit EscalationExhausted(const std::string& what) : std::logic_error(what) {}
};

/// Per-run memo of estimator applications for one instance.
///
/// Level 0 is the sentinel (0, 0) interval, a universally valid lower bound
/// for non-negative costs. Escalation is strictly one level at a time except
/// for jump_to_max(), which models applying the final estimator directly.
/// Counters record every application by level; theta_max counts applications
/// of each edge's own final level, which is the expensive-estimator metric
/// the benchmark reports.
class EstimationCache {
 public:
  explicit EstimationCache(const ProblemInstance& inst) : inst_(&inst) {
    applied_.assign(inst.edges.size(), 0);
    size_t max_k = 0;
    for (const auto& e : inst.edges) max_k = std::max(max_k, e.levels.size());
    level_counts_.assign(max_k, 0);
  }

  const ProblemInstance& instance() const { return *inst_; }

  int applied_level(int e) const { return applied_[e]; }

  int levels_remaining(int e) const {
    return static_cast<int>(inst_->edges[e].levels.size()) - applied_[e];
  }

  bool at_max_level(int e) const { return levels_remaining(e) == 0; }

  /// Bounds at the current level; the (0, 0) sentinel before any application.
  EstimatorLevel current_bounds(int e) const {
    if (applied_[e] == 0) return EstimatorLevel{Rational(0), Rational(0)};
    return inst_->edges[e].levels[applied_[e] - 1];
  }

  EstimatorLevel apply_next(int e) {
    const auto& levels = inst_->edges[e].levels;
    if (applied_[e] >= static_cast<int>(levels.size()))
      throw EscalationExhausted("no estimators remain for edge " +
                                inst_->edges[e].from + "->" + inst_->edges[e].to);
    const int level = ++applied_[e];
    ++level_counts_[level - 1];
    if (level == static_cast<int>(levels.size())) ++theta_max_;
    return levels[level - 1];
  }

  /// Applies the edge's final estimator directly, skipping intermediate
  /// levels (one application counted, at level k).
  EstimatorLevel jump_to_max(int e) {
    const auto& levels = inst_->edges[e].levels;
    if (applied_[e] >= static_cast<int>(levels.size()))
      throw EscalationExhausted("no estimators remain for edge " +
                                inst_->edges[e].from + "->" + inst_->edges[e].to);
    applied_[e] = static_cast<int>(levels.size());
    ++level_counts_[levels.size() - 1];
    ++theta_max_;
    return levels.back();
  }

  /// Escalates through every remaining level and returns the tightest bounds.
  /// Idempotent on fully estimated edges (no counter movement).
  EstimatorLevel tighten_fully(int e) {
    while (levels_remaining(e) > 0) apply_next(e);
    return inst_->edges[e].levels.back();
  }

  /// Invocation counts by level, index 0 = level 1.
  const std::vector<long long>& level_counts() const { return level_counts_; }

  long long level_count(int level) const {
    if (level < 1 || level > static_cast<int>(level_counts_.size())) return 0;
    return level_counts_[level - 1];
  }

  long long total_applications() const {
    long long total = 0;
    for (long long c : level_counts_) total += c;
    return total;
  }

  /// Applications of edges' own final estimator level.
  long long theta_max() const { return theta_max_; }

 private:
  const ProblemInstance* inst_;
  std::vector<int> applied_;
  std::vector<long long> level_counts_;
  long long theta_max_ = 0;
};

/// Component-wise sums of tightest edge bounds along a contiguous path,
/// escalating (and counting) whatever estimators are still missing.
inline PathBounds path_bounds(EstimationCache& cache, std::span<const int> path) {
  const ProblemInstance& inst = cache.instance();
  if (!path_contiguous(inst, path))
    throw std::invalid_argument("path is not contiguous");
  PathBounds pb{Rational(0), Rational(0)};
  for (int e : path) {
    const EstimatorLevel tight = cache.tighten_fully(e);
    pb.l += tight.l;
    pb.u += tight.u;
  }
  return pb;
}

}  // namespace tasp
