#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tasp/instance_gen.hpp"
#include "tasp/instance_io.hpp"
#include "tasp/search.hpp"

namespace tasp {

/// Simulated per-application estimation times by level. Level indices past
/// the third reuse tau3; the synthesis scheme emits exactly three levels.
struct CostModel {
  long long tau1 = 1;
  long long tau2 = 10;
  long long tau3 = 100;

  void validate() const {
    if (tau1 < 0 || tau1 > tau2 || tau2 > tau3)
      throw std::invalid_argument("cost model must satisfy 0 <= tau1 <= tau2 <= tau3");
  }
};

struct AlgStats {
  long long theta_max = 0;
  long long est_l1 = 0;
  long long est_l2 = 0;
  long long est_l3 = 0;
  long long expanded = 0;
  long long generated = 0;
  long long pruned = 0;
  long long sim_time = 0;
  double wall_seconds = 0;  // informational; never serialized
};

/// One (instance, seed) benchmark run. `bnb` carries the counters of the
/// bounded u-side phase (the fresh-cache policy makes them comparable with
/// the unbounded run); the bound columns come from the two-phase report.
struct BenchRecord {
  std::string instance;
  int seed = 0;
  AlgStats ei;
  AlgStats beast;
  AlgStats bnb;
  Rational ei_bound = Rational::infinity();
  Rational beast_bound = Rational::infinity();
  Rational l_star = Rational::infinity();
  Rational u_star = Rational::infinity();
  Rational b_star = Rational::infinity();
  bool timed_out = false;
};

struct BenchOptions {
  CostModel cost_model;
  double timeout_seconds = 300.0;  // per algorithm per instance; 0 disables
};

struct ColumnStats {
  double mean = 0;
  double stddev = 0;
  double min = 0;
  double max = 0;
  long long n = 0;  // applicable records; rows with a zero denominator are excluded
};

struct GroupMetrics {
  std::string group;
  long long records = 0;
  ColumnStats theta_reduction;   // 1 - theta_max(unbounded) / theta_max(baseline)
  ColumnStats extra_reduction;   // 1 - theta_max(bounded phase) / theta_max(unbounded)
  ColumnStats pruned_ratio;      // pruned / generated, bounded phase
  ColumnStats bound_factor;      // B*
};

struct MetricsTable {
  std::vector<BenchRecord> records;  // canonical order, timed-out rows flagged
  std::vector<GroupMetrics> groups;
  GroupMetrics overall;
};

enum class ReportFormat { csv, json, text };

inline ReportFormat parse_report_format(const std::string& text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "json") return ReportFormat::json;
  if (text == "text") return ReportFormat::text;
  throw std::invalid_argument("unsupported format '" + text + "'");
}

inline constexpr const char* kBenchCsvHeader =
    "instance,seed,alg,theta_max,est_l1,est_l2,est_l3,expanded,generated,pruned,"
    "l_star,u_star,b_star,sim_time";

namespace bench_detail {

inline AlgStats stats_from_report(const SolveReport& r, const CostModel& cm,
                                  double wall_seconds) {
  AlgStats s;
  s.theta_max = r.theta_max;
  if (!r.est_by_level.empty()) s.est_l1 = r.est_by_level[0];
  if (r.est_by_level.size() > 1) s.est_l2 = r.est_by_level[1];
  for (size_t i = 2; i < r.est_by_level.size(); ++i) s.est_l3 += r.est_by_level[i];
  s.expanded = r.expanded;
  s.generated = r.generated;
  s.pruned = r.pruned;
  s.sim_time = cm.tau1 * s.est_l1 + cm.tau2 * s.est_l2 + cm.tau3 * s.est_l3;
  s.wall_seconds = wall_seconds;
  return s;
}

inline int seed_from_name(const std::string& name) {
  const auto pos = name.rfind("-s");
  if (pos == std::string::npos) return 0;
  const std::string tail = name.substr(pos + 2);
  if (tail.empty() || tail.size() > 9) return 0;
  for (char c : tail)
    if (c < '0' || c > '9') return 0;
  return std::stoi(tail);
}

inline std::string family_of(const std::string& name) {
  const auto pos = name.rfind("-s");
  if (pos == std::string::npos) return name;
  const std::string tail = name.substr(pos + 2);
  if (tail.empty() || tail.size() > 9) return name;
  for (char c : tail)
    if (c < '0' || c > '9') return name;
  return name.substr(0, pos);
}

inline std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// Canonical record order: family, then numeric seed, then full name.
inline bool record_before(const BenchRecord& a, const BenchRecord& b) {
  const std::string fa = family_of(a.instance), fb = family_of(b.instance);
  if (fa != fb) return fa < fb;
  if (a.seed != b.seed) return a.seed < b.seed;
  return a.instance < b.instance;
}

inline ColumnStats column_stats(const std::vector<double>& values) {
  ColumnStats cs;
  cs.n = static_cast<long long>(values.size());
  if (values.empty()) return cs;
  double sum = 0;
  cs.min = values[0];
  cs.max = values[0];
  for (double v : values) {
    sum += v;
    cs.min = std::min(cs.min, v);
    cs.max = std::max(cs.max, v);
  }
  cs.mean = sum / double(values.size());
  double sq = 0;
  for (double v : values) sq += (v - cs.mean) * (v - cs.mean);
  cs.stddev = std::sqrt(sq / double(values.size()));
  return cs;
}

}  // namespace bench_detail

/// Runs the baseline, the unbounded u-side search, and the two-phase solver
/// on one instance; throws SearchTimeout through to the caller's handler.
inline BenchRecord bench_one(const ProblemInstance& inst, const BenchOptions& opt) {
  namespace d = bench_detail;
  BenchRecord rec;
  rec.instance = inst.name;
  rec.seed = d::seed_from_name(inst.name);

  auto deadline = [&]() -> std::optional<std::chrono::steady_clock::time_point> {
    if (opt.timeout_seconds <= 0) return std::nullopt;
    return std::chrono::steady_clock::now() +
           std::chrono::duration_cast<std::chrono::steady_clock::duration>(
               std::chrono::duration<double>(opt.timeout_seconds));
  };
  auto seconds_since = [](std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  {
    SearchOptions so;
    so.deadline = deadline();
    const auto t0 = std::chrono::steady_clock::now();
    const SolveReport r = ei_ucs(inst, so);
    rec.ei = d::stats_from_report(r, opt.cost_model, seconds_since(t0));
    rec.ei_bound = r.bound;
  }
  {
    SearchOptions so;
    so.deadline = deadline();
    const auto t0 = std::chrono::steady_clock::now();
    const SolveReport r = beast(inst, Rational::infinity(), so);
    rec.beast = d::stats_from_report(r, opt.cost_model, seconds_since(t0));
    rec.beast_bound = r.bound;
  }
  {
    BnbOptions bo;
    bo.deadline = deadline();
    const auto t0 = std::chrono::steady_clock::now();
    const TaspReport r = beauty_and_beast(inst, bo);
    const double wall = seconds_since(t0);
    if (r.sub_report) {
      rec.bnb = d::stats_from_report(*r.sub_report, opt.cost_model, wall);
    } else {
      rec.bnb.wall_seconds = wall;  // short-circuited: no u-side phase ran
    }
    rec.l_star = r.l_star;
    rec.u_star = r.u_star;
    rec.b_star = r.b_star;
  }
  return rec;
}

/// Benchmarks a materialized corpus. Seeds are recovered from the trailing
/// "-s<digits>" the generator puts in instance names. A record whose run hit
/// the deadline is flagged timed_out and carries no counters.
inline std::vector<BenchRecord> run_benchmark(const std::vector<ProblemInstance>& corpus,
                                              const BenchOptions& opt = {}) {
  opt.cost_model.validate();
  std::vector<BenchRecord> records;
  records.reserve(corpus.size());
  for (const ProblemInstance& inst : corpus) {
    const ValidationResult v = validate_instance(inst);
    if (!v.ok())
      throw std::invalid_argument("invalid instance '" + inst.name + "': " + v.violations[0]);
    try {
      records.push_back(bench_one(inst, opt));
    } catch (const SearchTimeout&) {
      BenchRecord rec;
      rec.instance = inst.name;
      rec.seed = bench_detail::seed_from_name(inst.name);
      rec.timed_out = true;
      records.push_back(rec);
    }
  }
  std::sort(records.begin(), records.end(), bench_detail::record_before);
  return records;
}

/// Expands family specs over a seed range and benchmarks every instance.
inline std::vector<BenchRecord> run_benchmark_sweep(const std::vector<GenSpec>& families,
                                                    int seed_lo, int seed_hi,
                                                    const BenchOptions& opt = {}) {
  if (seed_lo < 0 || seed_hi > 26 || seed_lo > seed_hi)
    throw std::invalid_argument("seed range must lie within [0, 26]");
  std::vector<ProblemInstance> corpus;
  for (const GenSpec& family : families) {
    for (int seed = seed_lo; seed <= seed_hi; ++seed) {
      GenSpec spec = family;
      spec.seed = seed;
      corpus.push_back(generate_instance(spec));
    }
  }
  return run_benchmark(corpus, opt);
}

/// Aggregates records into per-family and overall statistics. Records whose
/// denominator is zero for a column are excluded from that column only;
/// timed-out records are excluded from every aggregate.
inline MetricsTable compute_metrics(std::vector<BenchRecord> records) {
  namespace d = bench_detail;
  if (records.empty()) throw std::invalid_argument("no benchmark records");
  std::sort(records.begin(), records.end(), bench_detail::record_before);

  struct Acc {
    std::vector<double> col3, col4, col5, col6;
    long long records = 0;
  };
  std::map<std::string, Acc> groups;
  Acc overall;

  auto feed = [](Acc& acc, const BenchRecord& r) {
    ++acc.records;
    if (r.ei.theta_max > 0)
      acc.col3.push_back(1.0 - double(r.beast.theta_max) / double(r.ei.theta_max));
    if (r.beast.theta_max > 0)
      acc.col4.push_back(1.0 - double(r.bnb.theta_max) / double(r.beast.theta_max));
    if (r.bnb.generated > 0)
      acc.col5.push_back(double(r.bnb.pruned) / double(r.bnb.generated));
    if (!r.b_star.is_infinite()) acc.col6.push_back(r.b_star.to_double());
  };
  for (const BenchRecord& r : records) {
    if (r.timed_out) continue;
    feed(groups[d::family_of(r.instance)], r);
    feed(overall, r);
  }

  MetricsTable table;
  table.records = std::move(records);
  for (const auto& [name, acc] : groups) {
    GroupMetrics gm;
    gm.group = name;
    gm.records = acc.records;
    gm.theta_reduction = d::column_stats(acc.col3);
    gm.extra_reduction = d::column_stats(acc.col4);
    gm.pruned_ratio = d::column_stats(acc.col5);
    gm.bound_factor = d::column_stats(acc.col6);
    table.groups.push_back(std::move(gm));
  }
  table.overall.group = "all";
  table.overall.records = overall.records;
  table.overall.theta_reduction = d::column_stats(overall.col3);
  table.overall.extra_reduction = d::column_stats(overall.col4);
  table.overall.pruned_ratio = d::column_stats(overall.col5);
  table.overall.bound_factor = d::column_stats(overall.col6);
  return table;
}

namespace bench_detail {

struct CsvRow {
  const char* alg;
  const AlgStats* stats;
  std::string l_star, u_star, b_star;
};

inline void append_csv_rows(std::string& out, const BenchRecord& r) {
  if (r.instance.find(',') != std::string::npos || r.instance.find('\n') != std::string::npos)
    throw SerializeError("instance name '" + r.instance + "' cannot appear in CSV");
  const CsvRow rows[3] = {
      {"beast", &r.beast, "", r.beast_bound.str(), ""},
      {"bnb", &r.bnb, r.l_star.str(), r.u_star.str(), r.b_star.str()},
      {"ei-ucs", &r.ei, "", r.ei_bound.str(), ""},
  };
  for (const CsvRow& row : rows) {
    out += r.instance + "," + std::to_string(r.seed) + "," + row.alg + "," +
           std::to_string(row.stats->theta_max) + "," + std::to_string(row.stats->est_l1) +
           "," + std::to_string(row.stats->est_l2) + "," + std::to_string(row.stats->est_l3) +
           "," + std::to_string(row.stats->expanded) + "," +
           std::to_string(row.stats->generated) + "," + std::to_string(row.stats->pruned) +
           "," + row.l_star + "," + row.u_star + "," + row.b_star + "," +
           std::to_string(row.stats->sim_time) + "\n";
  }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

}  // namespace bench_detail

/// Records CSV with the pinned header, one row per (instance, seed, alg),
/// sorted canonically. Timed-out records are omitted (the header has no flag
/// column); callers report them separately.
inline std::string render_records_csv(const std::vector<BenchRecord>& records) {
  std::vector<const BenchRecord*> sorted;
  for (const auto& r : records)
    if (!r.timed_out) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const BenchRecord* a, const BenchRecord* b) {
    return bench_detail::record_before(*a, *b);
  });
  std::string out = std::string(kBenchCsvHeader) + "\n";
  for (const BenchRecord* r : sorted) bench_detail::append_csv_rows(out, *r);
  return out;
}

/// Parses a records CSV back into benchmark records; every (instance, seed)
/// must carry all three algorithm rows.
inline std::vector<BenchRecord> parse_records_csv(const std::string& text) {
  namespace d = bench_detail;
  std::vector<std::string> lines;
  std::string line;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(line);
      line.clear();
    } else if (c != '\r') {
      line += c;
    }
  }
  if (!line.empty()) lines.push_back(line);
  if (lines.empty() || lines[0] != kBenchCsvHeader)
    throw ParseError("bad or missing CSV header");

  std::map<std::pair<std::string, int>, BenchRecord> by_key;
  std::map<std::pair<std::string, int>, int> algs_seen;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto cells = d::split_csv_line(lines[i]);
    if (cells.size() != 14)
      throw ParseError("line " + std::to_string(i + 1) + ": expected 14 cells");
    try {
      const std::string& instance = cells[0];
      const int seed = std::stoi(cells[1]);
      const std::string& alg = cells[2];
      BenchRecord& rec = by_key[{instance, seed}];
      rec.instance = instance;
      rec.seed = seed;
      AlgStats s;
      s.theta_max = std::stoll(cells[3]);
      s.est_l1 = std::stoll(cells[4]);
      s.est_l2 = std::stoll(cells[5]);
      s.est_l3 = std::stoll(cells[6]);
      s.expanded = std::stoll(cells[7]);
      s.generated = std::stoll(cells[8]);
      s.pruned = std::stoll(cells[9]);
      s.sim_time = std::stoll(cells[13]);
      if (alg == "ei-ucs") {
        rec.ei = s;
        if (!cells[11].empty()) rec.ei_bound = Rational::parse(cells[11]);
      } else if (alg == "beast") {
        rec.beast = s;
        if (!cells[11].empty()) rec.beast_bound = Rational::parse(cells[11]);
      } else if (alg == "bnb") {
        rec.bnb = s;
        if (!cells[10].empty()) rec.l_star = Rational::parse(cells[10]);
        if (!cells[11].empty()) rec.u_star = Rational::parse(cells[11]);
        if (!cells[12].empty()) rec.b_star = Rational::parse(cells[12]);
      } else {
        throw ParseError("unknown alg '" + alg + "'");
      }
      algs_seen[{instance, seed}] |= alg == "ei-ucs" ? 1 : (alg == "beast" ? 2 : 4);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(i + 1) + ": " + e.what());
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(i + 1) + ": malformed numeric cell");
    }
  }
  std::vector<BenchRecord> records;
  for (auto& [key, rec] : by_key) {
    if (algs_seen[key] != 7)
      throw ParseError("incomplete record for instance '" + key.first + "'");
    records.push_back(std::move(rec));
  }
  return records;
}

namespace bench_detail {

inline nlohmann::ordered_json stats_json(const ColumnStats& cs, bool percent) {
  nlohmann::ordered_json j;
  const double scale = percent ? 100.0 : 1.0;
  j["n"] = cs.n;
  if (cs.n == 0) {
    j["mean"] = nullptr;
    return j;
  }
  j["mean"] = fixed2(cs.mean * scale);
  j["stddev"] = fixed2(cs.stddev * scale);
  j["min"] = fixed2(cs.min * scale);
  j["max"] = fixed2(cs.max * scale);
  return j;
}

inline nlohmann::ordered_json group_json(const GroupMetrics& gm) {
  nlohmann::ordered_json j;
  j["group"] = gm.group;
  j["records"] = gm.records;
  j["theta_max_reduction_pct"] = stats_json(gm.theta_reduction, true);
  j["extra_theta_max_reduction_pct"] = stats_json(gm.extra_reduction, true);
  j["pruned_nodes_pct"] = stats_json(gm.pruned_ratio, true);
  j["b_star"] = stats_json(gm.bound_factor, false);
  return j;
}

inline std::string stats_cell(const ColumnStats& cs, bool percent) {
  if (cs.n == 0) return "n/a";
  const double scale = percent ? 100.0 : 1.0;
  return fixed2(cs.mean * scale) + "±" + fixed2(cs.stddev * scale);
}

inline std::string range_cell(const ColumnStats& cs, bool percent) {
  if (cs.n == 0) return "n/a";
  const double scale = percent ? 100.0 : 1.0;
  return fixed2(cs.min * scale) + "–" + fixed2(cs.max * scale);
}

inline void pad_to(std::string& line, size_t width) {
  // Widths are display columns; ± and – are multi-byte.
  size_t display = 0;
  for (size_t i = 0; i < line.size();) {
    const unsigned char c = line[i];
    i += c < 0x80 ? 1 : (c < 0xe0 ? 2 : (c < 0xf0 ? 3 : 4));
    ++display;
  }
  while (display < width) {
    line += ' ';
    ++display;
  }
}

inline void render_histogram(std::string& out, const std::string& title,
                             const std::vector<double>& values, double lo, double hi) {
  constexpr int kBins = 20;
  constexpr int kBarWidth = 36;
  out += title + "\n";
  if (values.empty()) {
    out += "  (no applicable records)\n";
    return;
  }
  if (hi <= lo) hi = lo + 1.0;
  long long bins[kBins] = {};
  for (double v : values) {
    int idx = static_cast<int>((v - lo) / (hi - lo) * kBins);
    idx = std::clamp(idx, 0, kBins - 1);
    ++bins[idx];
  }
  long long max_count = 1;
  for (long long b : bins) max_count = std::max(max_count, b);
  for (int i = 0; i < kBins; ++i) {
    const double a = lo + (hi - lo) * i / kBins;
    const double b = lo + (hi - lo) * (i + 1) / kBins;
    char label[64];
    std::snprintf(label, sizeof label, "  [%8.2f, %8.2f%c %6lld ",
                  a, b, i + 1 == kBins ? ']' : ')', bins[i]);
    out += label;
    const int bar = bins[i] == 0
                        ? 0
                        : std::max<long long>(1, bins[i] * kBarWidth / max_count);
    out.append(static_cast<size_t>(bar), '#');
    out += '\n';
  }
}

inline std::string render_text(const MetricsTable& table) {
  std::string out;
  constexpr size_t kGroupW = 34, kNw = 8, kColW = 18;
  auto row = [&](const std::string& name, const std::string& n, const std::string& c3,
                 const std::string& c4, const std::string& c5, const std::string& c6) {
    std::string line = name;
    pad_to(line, kGroupW);
    line += n;
    pad_to(line, kGroupW + kNw);
    line += c3;
    pad_to(line, kGroupW + kNw + kColW);
    line += c4;
    pad_to(line, kGroupW + kNw + 2 * kColW);
    line += c5;
    pad_to(line, kGroupW + kNw + 3 * kColW);
    line += c6;
    out += line + "\n";
  };
  row("group", "records", "theta_max red. %", "extra red. %", "pruned %", "B*");
  for (const GroupMetrics& gm : table.groups)
    row(gm.group, std::to_string(gm.records), stats_cell(gm.theta_reduction, true),
        stats_cell(gm.extra_reduction, true), stats_cell(gm.pruned_ratio, true),
        stats_cell(gm.bound_factor, false));
  row("all (avg±std)", std::to_string(table.overall.records),
      stats_cell(table.overall.theta_reduction, true),
      stats_cell(table.overall.extra_reduction, true),
      stats_cell(table.overall.pruned_ratio, true), stats_cell(table.overall.bound_factor, false));
  row("all (min–max)", std::to_string(table.overall.records),
      range_cell(table.overall.theta_reduction, true),
      range_cell(table.overall.extra_reduction, true),
      range_cell(table.overall.pruned_ratio, true), range_cell(table.overall.bound_factor, false));

  long long timed_out = 0;
  for (const auto& r : table.records)
    if (r.timed_out) ++timed_out;
  if (timed_out > 0)
    out += std::to_string(timed_out) + " record(s) timed out and were excluded\n";

  std::vector<double> col3, col4, col5, col6;
  for (const auto& r : table.records) {
    if (r.timed_out) continue;
    if (r.ei.theta_max > 0)
      col3.push_back(100.0 * (1.0 - double(r.beast.theta_max) / double(r.ei.theta_max)));
    if (r.beast.theta_max > 0)
      col4.push_back(100.0 * (1.0 - double(r.bnb.theta_max) / double(r.beast.theta_max)));
    if (r.bnb.generated > 0)
      col5.push_back(100.0 * double(r.bnb.pruned) / double(r.bnb.generated));
    if (!r.b_star.is_infinite()) col6.push_back(r.b_star.to_double());
  }
  out += "\n";
  render_histogram(out, "histogram: theta_max reduction [%]", col3, 0.0, 100.0);
  out += "\n";
  render_histogram(out, "histogram: extra theta_max reduction [%]", col4, 0.0, 100.0);
  out += "\n";
  render_histogram(out, "histogram: pruned nodes [%]", col5, 0.0, 100.0);
  out += "\n";
  double b_hi = 1.0;
  for (double v : col6) b_hi = std::max(b_hi, v);
  render_histogram(out, "histogram: B*", col6, 1.0, b_hi);
  return out;
}

}  // namespace bench_detail

/// csv: the records CSV. json: records plus aggregates. text: a per-family
/// table with overall avg±std and min–max rows, then four 20-bin histograms.
inline std::string render_report(const MetricsTable& table, ReportFormat format) {
  namespace d = bench_detail;
  switch (format) {
    case ReportFormat::csv:
      return render_records_csv(table.records);
    case ReportFormat::json: {
      nlohmann::ordered_json j;
      j["groups"] = nlohmann::ordered_json::array();
      for (const GroupMetrics& gm : table.groups) j["groups"].push_back(d::group_json(gm));
      j["overall"] = d::group_json(table.overall);
      nlohmann::ordered_json timed_out = nlohmann::ordered_json::array();
      for (const auto& r : table.records)
        if (r.timed_out) timed_out.push_back(r.instance);
      j["timed_out"] = timed_out;
      j["records_csv"] = render_records_csv(table.records);
      return j.dump(2) + "\n";
    }
    case ReportFormat::text:
      return d::render_text(table);
  }
  throw std::invalid_argument("unsupported format");
}

}  // namespace tasp
