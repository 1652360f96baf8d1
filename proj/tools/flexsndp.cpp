// flexsndp command line: solve, verify, lp, oracle, embed-stats, bench, generate.
//
// Exit codes: 0 ok, 1 infeasible or failed, 2 usage, 3 guard exceeded. Errors
// are printed to stdout as a JSON object {"error": kind, "message": ...}.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "flexsndp/embed.hpp"
#include "flexsndp/instance.hpp"
#include "flexsndp/lp.hpp"
#include "flexsndp/oracle.hpp"
#include "flexsndp/pipeline.hpp"
#include "flexsndp/verify.hpp"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace flexsndp;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;

struct Options {
  std::string instance;
  std::string solution;
  std::optional<int> p;
  std::optional<int> q;
  std::uint64_t seed = 0;
  double c_beta = 4.0;
  double phi = 0.125;
  std::optional<int> t;
  std::optional<int> t_prime;
  int retries = 10;
  double eps_lp = kLpEpsilon;
  double eps_sep = kSeparationEpsilon;
  bool diagnostics = false;
  bool exact_base = false;
  std::string format = "json";
  std::string out;
  // embed-stats
  int builds = 5;
  std::string dump;
  // bench
  std::string suite = "pinned";
  int count = 10;
  bool with_oracle = false;
  int jobs = 1;
  // generate
  std::string kind = "random-gnm";
  int size = 8;
  double safe_fraction = 0.5;
  std::string cost_model = "uniform";
  int pairs = 2;
};

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    save_text(opt.out, text);
  }
}

int fail(const std::string& kind, const std::string& message, int code,
         const Json& extra = Json::object()) {
  Json doc = {{"error", kind}, {"message", message}};
  for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
  std::cout << doc.dump(2) << '\n';
  return code;
}

Json witness_json(const InfeasibilityWitness& w) {
  return {{"removed", w.removed},
          {"pair_index", w.pair_index},
          {"cut", w.cut.members()},
          {"description", w.describe()}};
}

FlexGraph load_graph(const Options& opt) {
  FlexGraph g = load_instance(opt.instance);
  if (opt.p || opt.q) g = g.with_requirement(opt.p.value_or(g.p()), opt.q.value_or(g.q()));
  return g;
}

PipelineParams pipeline_params(const Options& opt) {
  PipelineParams params;
  params.c_beta = opt.c_beta;
  params.phi = opt.phi;
  params.t_override = opt.t;
  params.t_prime_override = opt.t_prime;
  params.retry_cap = opt.retries;
  params.eps_lp = opt.eps_lp;
  params.eps_sep = opt.eps_sep;
  params.diagnostics = opt.diagnostics;
  params.seed = opt.seed;
  params.base = opt.exact_base ? BaseSolver::kExact : BaseSolver::kPrimalDual;
  return params;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

BenchRow bench_row(const std::string& name, const FlexGraph& g, const SolveResult& r,
                   const PipelineParams& params, double secs) {
  BenchRow row;
  row.instance = name;
  row.n = g.num_vertices();
  row.m = g.num_edges();
  row.p = g.p();
  row.q = g.q();
  row.seed = params.seed;
  row.feasible = static_cast<bool>(is_flex_connected(g, r.h, g.p(), g.q()));
  row.cost = r.total_cost;
  row.base_cost = r.base_cost;
  for (const StageReport& s : r.stages) {
    row.lp_total += s.lp_objective;
    row.attempts += s.attempts;
    for (double b : s.beta_hat) row.max_beta_hat = std::max(row.max_beta_hat, b);
  }
  row.seconds = secs;
  return row;
}

int run_solve(const Options& opt) {
  const FlexGraph g = load_graph(opt);
  const PipelineParams params = pipeline_params(opt);
  const auto start = std::chrono::steady_clock::now();
  const SolveResult result = solve_flex_sndp(g, params);
  const double secs = seconds_since(start);
  if (opt.format == "csv") {
    emit(opt, bench_csv_header() + bench_csv_row(bench_row(opt.instance, g, result, params, secs)));
  } else {
    emit(opt, run_report_json(g, result, params, secs));
  }
  return kExitOk;
}

int run_verify(const Options& opt) {
  const FlexGraph g = load_graph(opt);
  const EdgeSet h = parse_solution(load_text(opt.solution));
  for (EdgeId id : h) {
    if (id < 0 || id >= g.num_edges()) throw PreconditionError("solution references unknown edge");
  }
  const FlexCheck check = is_flex_connected(g, h, g.p(), g.q());
  Json doc = {{"feasible", check.connected}, {"cost", g.cost(h)}, {"p", g.p()}, {"q", g.q()}};
  if (check.witness) doc["witness"] = witness_json(*check.witness);
  emit(opt, doc.dump(2));
  return check.connected ? kExitOk : kExitFailed;
}

int run_lp(const Options& opt) {
  const FlexGraph g = load_graph(opt);
  const PipelineParams params = pipeline_params(opt);
  const SolveResult result = solve_flex_sndp(g, params);
  Json stages = Json::array();
  for (const StageReport& s : result.stages) {
    stages.push_back({{"stage", s.stage},
                      {"lp_objective", s.lp_objective},
                      {"lp_rounds", s.lp_rounds},
                      {"pool_size", s.pool_size},
                      {"added_cost", s.added_cost}});
  }
  emit(opt, Json{{"base_cost", result.base_cost}, {"stages", stages}}.dump(2));
  return kExitOk;
}

int run_oracle(const Options& opt) {
  const FlexGraph g = load_graph(opt);
  const auto start = std::chrono::steady_clock::now();
  const OptimumResult best = brute_force_optimum(g, g.p(), g.q());
  emit(opt, Json{{"edges", best.edges}, {"cost", best.cost}, {"seconds", seconds_since(start)}}
                .dump(2));
  return kExitOk;
}

int run_embed_stats(const Options& opt) {
  const FlexGraph g = load_graph(opt);
  const PipelineParams params = pipeline_params(opt);
  const EdgeSet h = base_solution(g, g.p(), params.base);
  AugmentLpOptions lp_options;
  lp_options.eps_lp = params.eps_lp;
  lp_options.eps_sep = params.eps_sep;
  const AugmentLpResult lp = solve_augment_lp(g, h, g.p(), 0, lp_options);
  const double beta_param = beta_parameter(g.num_vertices(), params.c_beta);
  const CapacityGraph cg = build_capacity_graph(g, h, lp.solution, g.p(), 0, beta_param);
  Json builds = Json::array();
  std::map<int, int> height_histogram;
  std::vector<int> rload_histogram(10, 0);
  for (int b = 0; b < opt.builds; ++b) {
    Rng rng = make_rng(params.seed, "embed-stats", static_cast<std::uint64_t>(b));
    const TreeDistribution dist =
        build_racke_distribution(cg.graph, cg.capacity, rng,
                                 RackeOptions{params.c_beta, params.c_h, params.c_iter, 0.0});
    if (b == 0 && !opt.dump.empty()) save_text(opt.dump, distribution_to_json(dist, cg.graph) + "\n");
    int max_height = 0;
    for (const TreeEmbedding& t : dist.trees) {
      ++height_histogram[t.height()];
      max_height = std::max(max_height, t.height());
    }
    const LoadReport lr = loads(dist, cg.graph);
    for (double r : lr.rload) {
      const int bucket = std::min(9, static_cast<int>(r / std::max(1e-12, dist.congestion) * 10));
      ++rload_histogram[bucket];
    }
    builds.push_back({{"beta_hat", dist.congestion},
                      {"trees", dist.trees.size()},
                      {"iterations", dist.iterations},
                      {"max_height", max_height}});
  }
  Json heights = Json::object();
  for (const auto& [height, count] : height_histogram) heights[std::to_string(height)] = count;
  emit(opt, Json{{"n", g.num_vertices()},
                 {"capacity_edges", cg.graph.num_edges()},
                 {"capacity_ratio", capacity_ratio(cg.capacity)},
                 {"beta_param", beta_param},
                 {"builds", builds},
                 {"height_histogram", heights},
                 {"rload_histogram_deciles", rload_histogram}}
                .dump(2));
  return kExitOk;
}

int run_bench(const Options& opt) {
  std::vector<SuiteEntry> entries;
  if (opt.suite == "pinned") {
    entries = pinned_suite();
  } else if (opt.suite == "generated") {
    for (int i = 0; i < opt.count; ++i) {
      GeneratorSpec spec;
      spec.kind = parse_generator_kind(opt.kind);
      spec.size = opt.size;
      spec.safe_fraction = opt.safe_fraction;
      spec.cost_model = parse_cost_model(opt.cost_model);
      spec.seed = opt.seed + static_cast<std::uint64_t>(i);
      spec.p = opt.p.value_or(1);
      spec.q = opt.q.value_or(1);
      spec.num_pairs = opt.pairs;
      entries.push_back(SuiteEntry{"generated-" + std::to_string(i), spec});
    }
  } else {
    throw PreconditionError("unknown suite: " + opt.suite);
  }
  // Runs are independent; workers fill their own slots and the report is
  // assembled afterwards in suite order.
  std::vector<BenchRow> rows_out(entries.size());
  auto run_one = [&](std::size_t i) {
    const SuiteEntry& entry = entries[i];
    const GeneratedInstance inst = generate_instance(entry.spec);
    PipelineParams params = pipeline_params(opt);
    params.seed = opt.seed ^ entry.spec.seed;
    const auto start = std::chrono::steady_clock::now();
    BenchRow& row = rows_out[i];
    try {
      const SolveResult r = solve_flex_sndp(inst.graph, params);
      row = bench_row(entry.name, inst.graph, r, params, seconds_since(start));
    } catch (const Error&) {
      row.instance = entry.name;
      row.n = inst.graph.num_vertices();
      row.m = inst.graph.num_edges();
      row.p = inst.graph.p();
      row.q = inst.graph.q();
      row.seed = params.seed;
      row.seconds = seconds_since(start);
    }
    if (opt.with_oracle && inst.graph.num_edges() <= kOracleMaxEdges &&
        inst.graph.num_vertices() <= kOracleMaxVertices) {
      const auto ostart = std::chrono::steady_clock::now();
      row.opt = brute_force_optimum(inst.graph, inst.graph.p(), inst.graph.q()).cost;
      row.oracle_seconds = seconds_since(ostart);
    }
  };
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      try {
        run_one(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::min<std::size_t>(static_cast<std::size_t>(opt.jobs), entries.size());
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::string csv = bench_csv_header();
  Json rows = Json::array();
  bool all_feasible = true;
  for (const BenchRow& row : rows_out) {
    all_feasible = all_feasible && row.feasible;
    csv += bench_csv_row(row);
    rows.push_back({{"instance", row.instance},
                    {"n", row.n},
                    {"m", row.m},
                    {"p", row.p},
                    {"q", row.q},
                    {"seed", row.seed},
                    {"feasible", row.feasible},
                    {"cost", row.cost},
                    {"lp_total", row.lp_total},
                    {"opt", row.opt ? Json(*row.opt) : Json(nullptr)},
                    {"seconds", row.seconds}});
  }
  emit(opt, opt.format == "csv" ? csv : rows.dump(2));
  return all_feasible ? kExitOk : kExitFailed;
}

int run_generate(const Options& opt) {
  GeneratorSpec spec;
  spec.kind = parse_generator_kind(opt.kind);
  spec.size = opt.size;
  spec.safe_fraction = opt.safe_fraction;
  spec.cost_model = parse_cost_model(opt.cost_model);
  spec.seed = opt.seed;
  spec.p = opt.p.value_or(1);
  spec.q = opt.q.value_or(1);
  spec.num_pairs = opt.pairs;
  const GeneratedInstance inst = generate_instance(spec);
  emit(opt, instance_to_json(inst.graph));
  if (!inst.feasible) {
    std::cerr << "warning: generated instance is not (p,q)-flex-connected\n";
    return kExitFailed;
  }
  return kExitOk;
}

void add_common(CLI::App* cmd, Options& opt, bool needs_instance) {
  if (needs_instance) cmd->add_option("instance", opt.instance, "Instance JSON file")->required();
  cmd->add_option("--p", opt.p, "Override p");
  cmd->add_option("--q", opt.q, "Override q");
  cmd->add_option("--seed", opt.seed, "Master seed");
  cmd->add_option("--c-beta", opt.c_beta, "Congestion constant c_beta");
  cmd->add_option("--phi", opt.phi, "Planning success probability phi");
  cmd->add_option("--t", opt.t, "Roundings per tree (overrides the schedule)");
  cmd->add_option("--t-prime", opt.t_prime, "Trees per attempt (overrides the schedule)");
  cmd->add_option("--retries", opt.retries, "Retry cap per stage");
  cmd->add_option("--epsilon-lp", opt.eps_lp, "LP tolerance");
  cmd->add_option("--epsilon-sep", opt.eps_sep, "Separation tolerance");
  cmd->add_flag("--diagnostics", opt.diagnostics, "Collect good-tree diagnostics");
  cmd->add_flag("--exact-base", opt.exact_base, "Use the brute-force base solution");
  cmd->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", opt.out, "Write output to PATH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flexsndp: LP rounding for (p,q)-flex-connectivity"};
  app.require_subcommand(1);
  Options opt;

  auto* solve = app.add_subcommand("solve", "Run the full pipeline");
  add_common(solve, opt, true);
  auto* verify = app.add_subcommand("verify", "Check a solution file");
  add_common(verify, opt, true);
  verify->add_option("solution", opt.solution, "Solution or report JSON")->required();
  auto* lp = app.add_subcommand("lp", "Report the stage LP objectives");
  add_common(lp, opt, true);
  auto* oracle = app.add_subcommand("oracle", "Brute-force optimum");
  add_common(oracle, opt, true);
  auto* embed = app.add_subcommand("embed-stats", "Tree embedding statistics at stage 0");
  add_common(embed, opt, true);
  embed->add_option("--builds", opt.builds, "Number of distributions to build");
  embed->add_option("--dump", opt.dump, "Write the first distribution as JSON to PATH");
  auto* bench = app.add_subcommand("bench", "Sweep a seeded suite");
  add_common(bench, opt, false);
  bench->add_option("--suite", opt.suite, "pinned or generated")
      ->check(CLI::IsMember({"pinned", "generated"}));
  bench->add_option("--count", opt.count, "Instances in a generated suite");
  bench->add_flag("--oracle", opt.with_oracle, "Also compute brute-force optima when small");
  bench->add_option("--jobs", opt.jobs, "Instances solved in parallel")
      ->check(CLI::PositiveNumber);
  auto* generate = app.add_subcommand("generate", "Write a seeded instance");
  add_common(generate, opt, false);
  for (auto* cmd : {bench, generate}) {
    cmd->add_option("--kind", opt.kind, "random-gnm, grid or two-terminal-layers");
    cmd->add_option("--size", opt.size, "Generator size parameter");
    cmd->add_option("--safe-fraction", opt.safe_fraction, "Probability that an edge is safe");
    cmd->add_option("--cost-model", opt.cost_model, "unit or uniform");
    cmd->add_option("--pairs", opt.pairs, "Number of terminal pairs");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kExitUsage);
  }

  try {
    if (*solve) return run_solve(opt);
    if (*verify) return run_verify(opt);
    if (*lp) return run_lp(opt);
    if (*oracle) return run_oracle(opt);
    if (*embed) return run_embed_stats(opt);
    if (*bench) return run_bench(opt);
    if (*generate) return run_generate(opt);
  } catch (const GuardError& e) {
    return fail("guard", e.what(), kExitGuard);
  } catch (const NotFlexConnectedError& e) {
    return fail("not-flex-connected", e.what(), kExitFailed,
                Json{{"witness", witness_json(e.witness())}});
  } catch (const StageFailure& e) {
    return fail("stage-failure", e.what(), kExitFailed,
                Json{{"report", Json::parse(stage_report_json(e.report()))}});
  } catch (const InfeasibleError& e) {
    return fail("infeasible", e.what(), kExitFailed);
  } catch (const PreconditionError& e) {
    return fail("usage", e.what(), kExitUsage);
  } catch (const Error& e) {
    return fail("failed", e.what(), kExitFailed);
  }
  return kExitUsage;
}
