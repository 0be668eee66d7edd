// tasp: generate, solve, verify, and benchmark estimated-weighted-digraph
// shortest-path instances.
//
// Exit codes: 0 success, 1 usage error, 2 validation error,
// 3 solver reported no solution (solve only).

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tasp/bench.hpp"
#include "tasp/ewdg.hpp"
#include "tasp/instance_gen.hpp"
#include "tasp/instance_io.hpp"
#include "tasp/oracle.hpp"
#include "tasp/search.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNoSolution = 3;

tasp::Topology parse_topology(const std::string& name) {
  if (name == "layered") return tasp::Topology::layered_dag;
  if (name == "grid") return tasp::Topology::grid;
  if (name == "random") return tasp::Topology::random_digraph;
  throw CLI::ValidationError("--topology", "must be layered, grid, or random");
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const int v = std::stoi(text);
    return {v, v};
  }
  return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
}

tasp::ProblemInstance load_validated(const std::string& path) {
  tasp::ProblemInstance inst = tasp::load_instance_file(path);
  const tasp::ValidationResult v = tasp::validate_instance(inst);
  if (!v.ok()) {
    std::string msg = "instance '" + path + "' is invalid:";
    for (const auto& violation : v.violations) msg += "\n  " + violation;
    throw std::invalid_argument(msg);
  }
  return inst;
}

nlohmann::ordered_json solve_report_json(const tasp::ProblemInstance& inst,
                                         const tasp::SolveReport& r) {
  nlohmann::ordered_json j;
  j["status"] = r.status == tasp::SolveStatus::found ? "found" : "no_solution";
  j["bound"] = r.bound.str();
  nlohmann::ordered_json path = nlohmann::ordered_json::array();
  for (int e : r.path) path.push_back(inst.edges[e].from + "->" + inst.edges[e].to);
  j["path"] = path;
  j["expanded"] = r.expanded;
  j["generated"] = r.generated;
  j["pruned"] = r.pruned;
  j["theta_max"] = r.theta_max;
  j["est_by_level"] = r.est_by_level;
  return j;
}

void emit_output(const std::optional<std::string>& path, const std::string& content) {
  if (path)
    tasp::write_file(*path, content);
  else
    std::cout << content;
}

// Sweep specs look like
//   layered:nodes=12,layers=4,density=0.6,cost-max=10,rng-seed=1..5
// and expand to one instance family per rng-seed.
std::vector<tasp::GenSpec> parse_sweep_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("sweep spec must look like topology:key=value,...");
  tasp::GenSpec base;
  base.topology = parse_topology(text.substr(0, colon));
  std::uint64_t rng_lo = 0, rng_hi = 0;

  std::string rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string item = rest.substr(0, comma);
    rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("sweep spec item '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "nodes") {
      base.node_count = std::stoi(value);
    } else if (key == "layers") {
      base.layers = std::stoi(value);
    } else if (key == "density") {
      base.density = std::stod(value);
    } else if (key == "cost-max") {
      base.cost_max = std::stoll(value);
    } else if (key == "rng-seed") {
      const auto [lo, hi] = parse_range(value);
      if (lo < 0 || hi < lo) throw std::invalid_argument("bad rng-seed range");
      rng_lo = static_cast<std::uint64_t>(lo);
      rng_hi = static_cast<std::uint64_t>(hi);
    } else {
      throw std::invalid_argument("unknown sweep spec key '" + key + "'");
    }
  }
  std::vector<tasp::GenSpec> families;
  for (std::uint64_t r = rng_lo; r <= rng_hi; ++r) {
    tasp::GenSpec spec = base;
    spec.rng_seed = r;
    families.push_back(spec);
  }
  return families;
}

struct GenerateArgs {
  std::string topology = "layered";
  int nodes = 8;
  int layers = 3;
  double density = 0.6;
  long long cost_max = 10;
  std::uint64_t rng_seed = 0;
  int seed = 0;
  std::string output;
};

int run_generate(const GenerateArgs& a) {
  tasp::GenSpec spec;
  spec.topology = parse_topology(a.topology);
  spec.node_count = a.nodes;
  spec.layers = a.layers;
  spec.density = a.density;
  spec.cost_max = a.cost_max;
  spec.rng_seed = a.rng_seed;
  spec.seed = a.seed;
  const tasp::ProblemInstance inst = tasp::generate_instance(spec);
  tasp::write_file(a.output, tasp::serialize_instance(inst));
  return kExitOk;
}

struct SolveArgs {
  std::string alg;
  std::string input;
  std::optional<std::string> output;
  std::optional<std::string> trace_path;
  std::optional<std::string> u_prune;
  std::optional<std::string> l_prune;
};

int run_solve(const SolveArgs& a) {
  if (a.u_prune && a.alg != "beast") {
    std::cerr << "--u-prune applies to --alg beast only\n";
    return kExitUsage;
  }
  if (a.l_prune && a.alg != "beauty") {
    std::cerr << "--l-prune applies to --alg beauty only\n";
    return kExitUsage;
  }
  const tasp::ProblemInstance inst = load_validated(a.input);
  tasp::SearchOptions opt;
  opt.trace = a.trace_path.has_value();

  nlohmann::ordered_json j;
  j["instance"] = inst.name;
  j["alg"] = a.alg;
  std::string trace;
  bool found = false;

  if (a.alg == "bnb") {
    tasp::BnbOptions bopt;
    bopt.trace = opt.trace;
    const tasp::TaspReport r = tasp::beauty_and_beast(inst, bopt);
    found = r.slb_report.status == tasp::SolveStatus::found;
    j["b_star"] = r.b_star.str();
    j["l_star"] = r.l_star.str();
    j["u_star"] = r.u_star.str();
    nlohmann::ordered_json path = nlohmann::ordered_json::array();
    for (int e : r.path) path.push_back(inst.edges[e].from + "->" + inst.edges[e].to);
    j["path"] = path;
    j["slb"] = solve_report_json(inst, r.slb_report);
    j["sub"] = r.sub_report ? solve_report_json(inst, *r.sub_report)
                            : nlohmann::ordered_json(nullptr);
    if (opt.trace) {
      trace = r.slb_report.trace.value_or("");
      if (r.sub_report) trace += r.sub_report->trace.value_or("");
    }
  } else {
    tasp::SolveReport r;
    if (a.alg == "ei-ucs") {
      r = tasp::ei_ucs(inst, opt);
    } else if (a.alg == "beast") {
      const tasp::Rational prune =
          a.u_prune ? tasp::Rational::parse(*a.u_prune) : tasp::Rational::infinity();
      r = tasp::beast(inst, prune, opt);
    } else if (a.alg == "beauty") {
      const tasp::Rational prune =
          a.l_prune ? tasp::Rational::parse(*a.l_prune) : tasp::Rational::infinity();
      r = tasp::beauty(inst, prune, opt);
    } else {
      std::cerr << "unknown algorithm '" << a.alg << "'\n";
      return kExitUsage;
    }
    found = r.status == tasp::SolveStatus::found;
    const nlohmann::ordered_json body = solve_report_json(inst, r);
    for (const auto& [key, value] : body.items()) j[key] = value;
    if (opt.trace) trace = r.trace.value_or("");
  }

  if (a.trace_path) tasp::write_file(*a.trace_path, trace);
  emit_output(a.output, j.dump(2) + "\n");
  return found ? kExitOk : kExitNoSolution;
}

struct VerifyArgs {
  std::string input;
  int max_nodes = 14;
};

int run_verify(const VerifyArgs& a) {
  const tasp::ProblemInstance inst = load_validated(a.input);
  const tasp::OracleLimits limits{a.max_nodes};
  const tasp::OracleResult oracle = tasp::oracle_solve(inst, limits);

  std::cout << "instance: " << inst.name << "\n";
  std::cout << "oracle: L*=" << oracle.l_star.str() << " U*=" << oracle.u_star.str()
            << " B*=" << oracle.b_star.str() << "\n";
  std::cout << "slb witness: "
            << (oracle.slb_witness ? tasp::format_path(inst, *oracle.slb_witness) : "none")
            << "\n";
  std::cout << "sub witness: "
            << (oracle.sub_witness ? tasp::format_path(inst, *oracle.sub_witness) : "none")
            << "\n";

  bool ok = true;
  auto check = [&](const std::string& name, bool pass) {
    std::cout << "check " << name << ": " << (pass ? "ok" : "MISMATCH") << "\n";
    ok = ok && pass;
  };

  const tasp::SolveReport r_beauty = tasp::beauty(inst);
  const tasp::SolveReport r_beast = tasp::beast(inst);
  const tasp::SolveReport r_ei = tasp::ei_ucs(inst);
  const tasp::TaspReport r_bnb = tasp::beauty_and_beast(inst);

  check("beauty(inf) bound=" + r_beauty.bound.str(), r_beauty.bound == oracle.l_star);
  check("beast(inf) bound=" + r_beast.bound.str(), r_beast.bound == oracle.u_star);
  check("ei-ucs bound=" + r_ei.bound.str(), r_ei.bound == oracle.u_star);
  check("bnb b_star=" + r_bnb.b_star.str(), r_bnb.b_star == oracle.b_star);
  if (r_bnb.slb_report.status == tasp::SolveStatus::found && !r_bnb.b_star.is_infinite())
    check("admissible(path, B*)", tasp::check_admissible(inst, r_bnb.path, r_bnb.b_star, limits));

  std::cout << "verify: " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitValidation;
}

struct BenchArgs {
  std::optional<std::string> corpus_dir;
  std::optional<std::string> sweep_spec;
  std::string seeds = "0..26";
  double timeout = 300.0;
  std::string tau = "1,10,100";
  std::string output;
};

int run_bench(const BenchArgs& a) {
  if (!a.corpus_dir == !a.sweep_spec) {
    std::cerr << "exactly one of --corpus and --sweep is required\n";
    return kExitUsage;
  }
  tasp::BenchOptions opt;
  opt.timeout_seconds = a.timeout;
  {
    long long tau[3] = {1, 10, 100};
    std::string rest = a.tau;
    for (int i = 0; i < 3; ++i) {
      const auto comma = rest.find(',');
      const std::string item = rest.substr(0, comma);
      if (item.empty()) throw std::invalid_argument("--tau needs three integers");
      tau[i] = std::stoll(item);
      if (comma == std::string::npos && i < 2)
        throw std::invalid_argument("--tau needs three integers");
      rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
    }
    opt.cost_model = tasp::CostModel{tau[0], tau[1], tau[2]};
    opt.cost_model.validate();
  }

  std::vector<tasp::BenchRecord> records;
  if (a.corpus_dir) {
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(*a.corpus_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".json")
        files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      std::cerr << "no .json instances under " << *a.corpus_dir << "\n";
      return kExitValidation;
    }
    std::vector<tasp::ProblemInstance> corpus;
    for (const auto& f : files) corpus.push_back(load_validated(f));
    records = tasp::run_benchmark(corpus, opt);
  } else {
    const auto [lo, hi] = parse_range(a.seeds);
    records = tasp::run_benchmark_sweep(parse_sweep_spec(*a.sweep_spec), lo, hi, opt);
  }

  for (const auto& r : records)
    if (r.timed_out) std::cerr << "timeout: " << r.instance << " (excluded)\n";
  tasp::write_file(a.output, tasp::render_records_csv(records));
  return kExitOk;
}

struct ReportArgs {
  std::string input;
  std::string format = "text";
};

int run_report(const ReportArgs& a) {
  const auto records = tasp::parse_records_csv(tasp::read_file(a.input));
  const tasp::MetricsTable table = tasp::compute_metrics(records);
  std::cout << tasp::render_report(table, tasp::parse_report_format(a.format));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shortest-path search with multi-level edge-weight estimators"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* cmd_gen = app.add_subcommand("generate", "synthesize a benchmark instance");
  cmd_gen->add_option("--topology", gen.topology, "layered|grid|random")
      ->default_val("layered");
  cmd_gen->add_option("--nodes", gen.nodes, "node count");
  cmd_gen->add_option("--layers", gen.layers, "layer count (layered only)");
  cmd_gen->add_option("--density", gen.density, "edge density in (0,1]");
  cmd_gen->add_option("--cost-max", gen.cost_max, "base costs drawn from [1,C]");
  cmd_gen->add_option("--rng-seed", gen.rng_seed, "topology randomness seed");
  cmd_gen->add_option("--seed", gen.seed, "estimator configuration seed, 0..26")
      ->check(CLI::Range(0, 26));
  cmd_gen->add_option("-o,--output", gen.output, "output instance file")->required();

  SolveArgs solve;
  auto* cmd_solve = app.add_subcommand("solve", "run one algorithm on an instance");
  cmd_solve->add_option("--alg", solve.alg, "ei-ucs|beast|beauty|bnb")
      ->required()
      ->check(CLI::IsMember({"ei-ucs", "beast", "beauty", "bnb"}));
  cmd_solve->add_option("--u-prune", solve.u_prune, "upper prune threshold (beast)");
  cmd_solve->add_option("--l-prune", solve.l_prune, "lower prune threshold (beauty)");
  cmd_solve->add_option("--trace", solve.trace_path, "write the event log to a file");
  cmd_solve->add_option("-i,--input", solve.input, "instance file")->required();
  cmd_solve->add_option("-o,--output", solve.output, "report file (default stdout)");

  VerifyArgs verify;
  auto* cmd_verify = app.add_subcommand("verify", "cross-check all algorithms against the oracle");
  cmd_verify->add_option("-i,--input", verify.input, "instance file")->required();
  cmd_verify->add_option("--max-nodes", verify.max_nodes, "oracle node limit");

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench", "benchmark a corpus or a generated sweep");
  cmd_bench->add_option("--corpus", bench.corpus_dir, "directory of instance files");
  cmd_bench->add_option("--sweep", bench.sweep_spec,
                        "family spec, e.g. layered:nodes=12,layers=4,density=0.6,"
                        "cost-max=10,rng-seed=1..5");
  cmd_bench->add_option("--seeds", bench.seeds, "seed range for sweeps (default 0..26)");
  cmd_bench->add_option("--timeout", bench.timeout, "per-algorithm timeout in seconds");
  cmd_bench->add_option("--tau", bench.tau, "simulated per-level times, e.g. 1,10,100");
  cmd_bench->add_option("-o,--output", bench.output, "output CSV file")->required();

  ReportArgs report;
  auto* cmd_report = app.add_subcommand("report", "aggregate a benchmark CSV");
  cmd_report->add_option("-i,--input", report.input, "records CSV file")->required();
  cmd_report->add_option("--format", report.format, "csv|json|text")
      ->check(CLI::IsMember({"csv", "json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_gen->parsed()) return run_generate(gen);
    if (cmd_solve->parsed()) return run_solve(solve);
    if (cmd_verify->parsed()) return run_verify(verify);
    if (cmd_bench->parsed()) return run_bench(bench);
    if (cmd_report->parsed()) return run_report(report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
