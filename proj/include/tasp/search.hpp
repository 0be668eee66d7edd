#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tasp/estimation.hpp"
#include "tasp/ewdg.hpp"

namespace tasp {

class SearchTimeout : public std::runtime_error {
 public:
  explicit SearchTimeout(const std::string& what) : std::runtime_error(what) {}
};

enum class SolveStatus { found, no_solution };

/// Output of one solver run. `bound` is the popped goal key: a tight path
/// upper bound for the u-side searches, a tight path lower bound for the
/// l-side one; infinity when no solution was returned.
struct SolveReport {
  SolveStatus status = SolveStatus::no_solution;
  std::vector<int> path;  // edge indices into the instance, source to goal
  Rational bound = Rational::infinity();
  long long expanded = 0;   // OPEN pops
  long long generated = 0;  // successor considerations
  long long pruned = 0;     // rejections caused by the prune threshold
  std::vector<long long> est_by_level;  // index 0 = level 1
  long long theta_max = 0;              // final-level estimator applications
  std::optional<std::string> trace;     // newline-delimited event log
};

struct TaspReport {
  std::vector<int> path;
  Rational b_star = Rational::infinity();
  Rational l_star = Rational::infinity();
  Rational u_star = Rational::infinity();
  SolveReport slb_report;
  std::optional<SolveReport> sub_report;
};

struct SearchOptions {
  bool trace = false;
  /// Applies an edge's final estimator directly when the successor is new
  /// and no prune threshold is active; counters then skip the cheap levels.
  /// Off by default so event logs follow the plain escalation loop.
  bool jump_to_best = false;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct BnbOptions {
  bool trace = false;
  /// Reuse the l-side phase's estimation cache in the u-side phase. Off by
  /// default: fresh caches keep the phase counters independently comparable.
  bool share_cache = false;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

namespace search_detail {

enum class Mode { ei_ucs, beast, beauty };

struct OpenEntry {
  Rational key;
  std::uint64_t seq;
  int node;
  friend bool operator<(const OpenEntry& a, const OpenEntry& b) {
    const int c = cmp(a.key, b.key);
    if (c != 0) return c < 0;
    return a.seq < b.seq;
  }
};

inline void append_event(std::string& log, const std::string& line) {
  log += line;
  log += '\n';
}

/// Best-first search skeleton shared by the three solvers. Keys are tight
/// path bound sums; OPEN is min-ordered with FIFO tie-breaking and
/// decrease-key realized as remove + reinsert. A successor already in CLOSED
/// never escalates or updates: its key is final, so the very first loop
/// condition fails at the (0, 0) sentinel.
inline SolveReport run_best_first(const GraphIndex& graph, EstimationCache& cache,
                                  Mode mode, const Rational& prune,
                                  const SearchOptions& opt) {
  const ProblemInstance& inst = graph.instance();
  const bool u_side = mode != Mode::beauty;
  const char* prune_loop_reason = u_side ? "u_prune_loop" : "l_prune_loop";
  const char* prune_key_reason = u_side ? "u_prune_key" : "l_prune_key";

  SolveReport report;
  std::string log;
  const std::vector<long long> counts_before = cache.level_counts();
  const long long theta_before = cache.theta_max();

  std::vector<Rational> g(graph.node_count(), Rational::infinity());
  std::vector<std::pair<int, int>> parent(graph.node_count(), {-1, -1});  // (node, edge)
  std::vector<bool> closed(graph.node_count(), false);
  std::set<OpenEntry> open;
  std::vector<std::optional<OpenEntry>> open_handle(graph.node_count());
  std::uint64_t next_seq = 0;

  auto insert_open = [&](int node, const Rational& key) {
    if (open_handle[node]) open.erase(*open_handle[node]);
    const OpenEntry entry{key, next_seq++, node};
    open.insert(entry);
    open_handle[node] = entry;
    if (opt.trace)
      append_event(log, "INS " + graph.node_name(node) + " " + key.str());
  };

  auto finish = [&](SolveReport&& r) {
    const auto& counts_after = cache.level_counts();
    r.est_by_level.assign(counts_after.size(), 0);
    for (size_t i = 0; i < counts_after.size(); ++i) {
      const long long before = i < counts_before.size() ? counts_before[i] : 0;
      r.est_by_level[i] = counts_after[i] - before;
    }
    r.theta_max = cache.theta_max() - theta_before;
    if (opt.trace) r.trace = std::move(log);
    return std::move(r);
  };

  auto log_est = [&](int edge) {
    if (!opt.trace) return;
    const EstimatorLevel b = cache.current_bounds(edge);
    append_event(log, "EST " + inst.edges[edge].from + "->" + inst.edges[edge].to + " L" +
                          std::to_string(cache.applied_level(edge)) + " l=" + b.l.str() +
                          " u=" + b.u.str());
  };

  g[graph.source()] = Rational(0);
  insert_open(graph.source(), Rational(0));

  while (!open.empty()) {
    if (opt.deadline && std::chrono::steady_clock::now() > *opt.deadline)
      throw SearchTimeout("search deadline exceeded");

    const OpenEntry top = *open.begin();
    open.erase(open.begin());
    open_handle[top.node] = std::nullopt;
    const int n = top.node;
    ++report.expanded;
    if (opt.trace) append_event(log, "POP " + graph.node_name(n) + " " + top.key.str());

    if (graph.is_goal(n)) {
      std::vector<int> path;
      for (int v = n; parent[v].first != -1; v = parent[v].first)
        path.push_back(parent[v].second);
      std::reverse(path.begin(), path.end());
      report.status = SolveStatus::found;
      report.path = std::move(path);
      report.bound = g[n];
      if (opt.trace)
        append_event(log, "RET " + format_path(inst, report.path) + " " + report.bound.str());
      return finish(std::move(report));
    }
    closed[n] = true;

    for (int e : graph.out_edges(n)) {
      const int s = graph.edge_to(e);
      ++report.generated;

      bool prune_loop_exit = false;
      if (mode == Mode::ei_ucs) {
        while (cache.levels_remaining(e) > 0) {
          cache.apply_next(e);
          log_est(e);
        }
      } else if (opt.jump_to_best && prune.is_infinite() && g[s].is_infinite() &&
                 cache.applied_level(e) == 0) {
        cache.jump_to_max(e);
        log_est(e);
      } else {
        while (true) {
          const Rational reach = g[n] + cache.current_bounds(e).l;
          const bool below_g = reach < g[s];
          const bool below_prune = reach <= prune;
          if (!below_g || !below_prune || cache.levels_remaining(e) == 0) {
            prune_loop_exit = below_g && !below_prune;
            break;
          }
          cache.apply_next(e);
          log_est(e);
        }
      }

      const EstimatorLevel bounds = cache.current_bounds(e);
      const Rational candidate =
          u_side ? g[n] + bounds.u : g[n] + bounds.l;
      const bool improves = candidate < g[s];
      const bool within_prune = candidate <= prune;
      const bool tight_enough = u_side || cache.at_max_level(e);

      if (improves && within_prune && tight_enough) {
        g[s] = candidate;
        parent[s] = {n, e};
        insert_open(s, candidate);
      } else if (prune_loop_exit || (improves && !within_prune)) {
        ++report.pruned;
        if (opt.trace)
          append_event(log, "PRUNE " + inst.edges[e].from + "->" + inst.edges[e].to + " " +
                                (prune_loop_exit ? prune_loop_reason : prune_key_reason));
      }
    }
  }

  if (opt.trace) append_event(log, "RET empty inf");
  return finish(std::move(report));
}

}  // namespace search_detail

/// Uniform-cost search on tight upper bounds that escalates every edge it
/// encounters to the final estimator level, ignoring estimation effort.
/// The baseline the lazy solvers are measured against.
inline SolveReport ei_ucs(const ProblemInstance& inst, const SearchOptions& opt = {}) {
  GraphIndex graph(inst);
  EstimationCache cache(inst);
  return search_detail::run_best_first(graph, cache, search_detail::Mode::ei_ucs,
                                       Rational::infinity(), opt);
}

/**
 * Best-first search on tight path upper bounds with lazy estimator
 * escalation. For each successor edge the estimation loop runs while
 *
 *   g_u(n) + l(e) < g_u(s)   and   g_u(n) + l(e) <= u_prune
 *
 * and estimators remain; the successor is then updated iff
 * g_u(n) + u(e) beats its key and stays within u_prune. With
 * u_prune >= U* the first popped goal carries the optimal tight upper
 * bound U*; with u_prune < U* the search returns (empty, inf), certifying
 * that no solution has a tight upper bound within the threshold.
 */
inline SolveReport beast(const ProblemInstance& inst,
                         const Rational& u_prune = Rational::infinity(),
                         const SearchOptions& opt = {}) {
  if (!u_prune.is_infinite() && u_prune < Rational(0))
    throw std::invalid_argument("u_prune must be non-negative");
  GraphIndex graph(inst);
  EstimationCache cache(inst);
  return search_detail::run_best_first(graph, cache, search_detail::Mode::beast, u_prune, opt);
}

/// Best-first search on tight path lower bounds. The escalation loop stops
/// as soon as a cheap lower bound already loses against the incumbent key
/// (lower bounds only rise with the level, so the expensive estimators can
/// be skipped); a successor is updated only from a fully estimated edge, so
/// every stored key is a tight path lower bound and the first popped goal
/// carries L* when l_prune >= L*.
inline SolveReport beauty(const ProblemInstance& inst,
                          const Rational& l_prune = Rational::infinity(),
                          const SearchOptions& opt = {}) {
  if (!l_prune.is_infinite() && l_prune < Rational(0))
    throw std::invalid_argument("l_prune must be non-negative");
  GraphIndex graph(inst);
  EstimationCache cache(inst);
  return search_detail::run_best_first(graph, cache, search_detail::Mode::beauty, l_prune, opt);
}

/**
 * Two-phase solver for the tightest admissibility factor. Phase one solves
 * the lower-bound problem exactly (l_prune = inf); the upper bound of its
 * witness then primes the u-side search as u_prune, which can only discard
 * estimator applications, never answers. Returns the exact ratio of U* to
 * L* as B*, 1 when the witness's bounds already meet, and infinity when
 * U* exceeds L* = 0 or no solution exists.
 */
inline TaspReport beauty_and_beast(const ProblemInstance& inst, const BnbOptions& opt = {}) {
  GraphIndex graph(inst);
  SearchOptions phase_opt{opt.trace, false, opt.deadline};

  TaspReport report;
  EstimationCache slb_cache(inst);
  report.slb_report = search_detail::run_best_first(
      graph, slb_cache, search_detail::Mode::beauty, Rational::infinity(), phase_opt);
  if (report.slb_report.status == SolveStatus::no_solution) return report;

  const Rational l_star = report.slb_report.bound;
  const Rational u_slb = path_bounds(slb_cache, report.slb_report.path).u;
  // Escalations spent on the witness's upper bound belong to this phase.
  report.slb_report.est_by_level = slb_cache.level_counts();
  report.slb_report.theta_max = slb_cache.theta_max();

  report.l_star = l_star;
  if (l_star == u_slb) {
    report.path = report.slb_report.path;
    report.b_star = Rational(1);
    report.u_star = l_star;
    return report;
  }

  EstimationCache fresh_cache(inst);
  EstimationCache& sub_cache = opt.share_cache ? slb_cache : fresh_cache;
  SolveReport sub = search_detail::run_best_first(graph, sub_cache,
                                                  search_detail::Mode::beast, u_slb, phase_opt);
  report.path = sub.path;
  report.u_star = sub.bound;
  report.b_star = (l_star == Rational(0) && sub.bound > Rational(0))
                      ? Rational::infinity()
                      : sub.bound / l_star;
  report.sub_report = std::move(sub);
  return report;
}

}  // namespace tasp
