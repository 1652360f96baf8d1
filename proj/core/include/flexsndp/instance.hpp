#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flexsndp/graph.hpp"
#include "flexsndp/pipeline.hpp"

namespace flexsndp {

// Instance files: {"n", "edges": [{"id","u","v","cost","safe"}], "pairs": [[s,t]], "p", "q"}.
// The schema lives in docs/instance.schema.json.
FlexGraph parse_instance(const std::string& text);
FlexGraph load_instance(const std::string& path);
std::string instance_to_json(const FlexGraph& graph);
void save_text(const std::string& path, const std::string& text);
std::string load_text(const std::string& path);

enum class GeneratorKind { kRandomGnm, kGrid, kTwoTerminalLayers };
enum class CostModel { kUnit, kUniform };

GeneratorKind parse_generator_kind(const std::string& name);
CostModel parse_cost_model(const std::string& name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kRandomGnm;
  // Vertices for random-gnm, side length for grid, layer count for
  // two-terminal-layers.
  int size = 8;
  double safe_fraction = 0.5;
  CostModel cost_model = CostModel::kUniform;
  std::uint64_t seed = 0;
  int p = 1;
  int q = 1;
  int num_pairs = 2;       // ignored by two-terminal-layers
  double extra_edges = 1.5;  // random edges per vertex on top of the backbone
  bool backbone = true;
};

struct GeneratedInstance {
  FlexGraph graph;
  bool feasible = false;  // (p, q)-flex-connected using every edge
};

// Deterministic for a given spec. The backbone is a Hamiltonian ring repeated
// ceil((p + q) / 2) times, so every cut carries at least p + q edges.
// Throws PreconditionError on out-of-range parameters.
GeneratedInstance generate_instance(const GeneratorSpec& spec);

// Fixed 50-instance suite used by the acceptance binary and `bench --suite
// pinned`: n in [6, 14], (p, q) cycling through (1,1), (2,1), (1,2), (2,2).
// Random instances with n <= 10 keep m <= 22 so brute-force optima stay
// available.
struct SuiteEntry {
  std::string name;
  GeneratorSpec spec;
};
std::vector<SuiteEntry> pinned_suite();

// Solution files: {"edges": [ids], "cost": c}. parse_solution also accepts a
// run report and reads its "solution" field.
std::string solution_to_json(const FlexGraph& graph, const EdgeSet& h);
EdgeSet parse_solution(const std::string& text);

std::string stage_report_json(const StageReport& report);
std::string run_report_json(const FlexGraph& graph, const SolveResult& result,
                            const PipelineParams& params, double wall_seconds);

// Versioned bench CSV.
inline constexpr const char* kBenchCsvVersion = "# flexsndp-bench-csv v1";
std::string bench_csv_header();

struct BenchRow {
  std::string instance;
  int n = 0;
  int m = 0;
  int p = 0;
  int q = 0;
  std::uint64_t seed = 0;
  bool feasible = false;
  double cost = 0.0;
  double base_cost = 0.0;
  double lp_total = 0.0;
  std::optional<double> opt;
  double seconds = 0.0;
  double oracle_seconds = 0.0;
  int attempts = 0;
  double max_beta_hat = 0.0;
};
std::string bench_csv_row(const BenchRow& row);

}  // namespace flexsndp
