#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flexsndp/embed.hpp"
#include "flexsndp/graph.hpp"
#include "flexsndp/lp.hpp"
#include "flexsndp/verify.hpp"

namespace flexsndp {

enum class BaseSolver { kPrimalDual, kExact };

struct PipelineParams {
  double c_beta = 4.0;
  double c_h = 4.0;
  int c_iter = 8;
  double c_r = 2.0;
  double phi = 0.125;  // planning value for the per-round success probability
  double eps_lp = kLpEpsilon;
  double eps_sep = kSeparationEpsilon;
  std::optional<int> t_override;
  std::optional<int> t_prime_override;
  // Connectivity used in the threshold 1 / (4 c beta); 0 means p + l + 1.
  int threshold_connectivity = 0;
  int retry_cap = 10;
  std::uint64_t seed = 0;
  bool diagnostics = false;
  int diagnostic_trees = 20;
  BaseSolver base = BaseSolver::kPrimalDual;

  void validate() const;
};

// Per-stage diagnostics gathered on sampled trees (see stage_diagnostics).
struct DiagnosticsSummary {
  int violating_sets = 0;
  int trees = 0;
  double min_good_fraction = 1.0;
  int max_shattered = 0;
  double shattered_bound = 0.0;
  int bound_violations = 0;
  int flow_checks = 0;
  int flow_violations = 0;
  bool enumeration_skipped = false;
};

struct StageReport {
  int stage = 0;
  double lp_objective = 0.0;
  int lp_rounds = 0;
  int pool_size = 0;
  double theta = 0.0;
  double beta_param = 0.0;
  int num_large = 0;
  bool short_circuit = false;
  int t = 0;
  int t_prime = 0;
  int attempts = 0;
  int trees_sampled = 0;
  int roundings = 0;
  std::vector<double> beta_hat;  // measured congestion per attempt
  std::vector<int> tree_heights;
  EdgeSet added;
  double added_cost = 0.0;
  std::optional<DiagnosticsSummary> diagnostics;
};

class StageFailure : public Error {
 public:
  StageFailure(const std::string& what, StageReport report)
      : Error(what), report_(std::move(report)) {}
  const StageReport& report() const { return report_; }

 private:
  StageReport report_;
};

// (p, 0)-flex-connected subgraph: p rounds of primal-dual covering of the
// deficient cuts (each round raises the connectivity of every pair by one),
// or an exact brute-force optimum. Throws InfeasibleError naming a pair and a
// deficient cut when G itself is not p-connected for some pair.
EdgeSet base_solution(const FlexGraph& graph, int p, BaseSolver solver = BaseSolver::kPrimalDual);

// Capacitated graph handed to the tree embedding. Edges are renumbered;
// origin[e] is the input edge behind refined edge e.
struct CapacityGraph {
  FlexGraph graph;
  CapacityMap capacity;
  std::vector<EdgeId> origin;
  EdgeSet h;  // refined ids of the input H
  double theta = 0.0;
  std::vector<double> adjusted_x;  // per input edge, after small-value rounding
  int zeroed = 0;
  int restored = 0;  // dropped values put back to keep a pooled cut covered
  std::vector<int> copies;  // per input edge
};

// Rounds candidate values below 1/n^3 to zero (rescaling the rest by 1 + 1/n
// when any were dropped), splits every candidate with value >= theta into
// ceil(x / (theta/2)) parallel copies of equal share, gives H edges capacity
// theta = 1 / (4 (p + l + 1) beta_param) and drops zero candidates. A pooled
// constraint left under-covered by the rounding gets its dropped values back.
CapacityGraph build_capacity_graph(const FlexGraph& graph, const EdgeSet& h,
                                   const FractionalSolution& x, int p, int l, double beta_param,
                                   std::span<const CutConstraint> pool = {},
                                   int threshold_connectivity = 0);

// t = ceil(ln(4k 2^{2 beta c}) / phi) and t' = ceil(8/3 ln(2 n^{2c})), where
// c is the stage connectivity p + l + 1.
int rounding_schedule(int num_pairs, double beta_param, int connectivity, double phi);
int tree_schedule(int num_vertices, int connectivity);

struct StageOutcome {
  EdgeSet h;
  StageReport report;
};

// One augmentation stage from (p, l) to (p, l + 1)-flex-connectivity.
StageOutcome augment_stage(const FlexGraph& graph, const EdgeSet& h, int p, int l,
                           const PipelineParams& params);

struct SolveResult {
  EdgeSet h;
  EdgeSet base;
  double base_cost = 0.0;
  double total_cost = 0.0;
  std::vector<StageReport> stages;
};

// Base solution followed by augmentation stages l = 0 .. q - 1.
SolveResult solve_flex_sndp(const FlexGraph& graph, const PipelineParams& params);

struct StageDiagnostics {
  bool is_good = false;
  double blocked_capacity = 0.0;
  std::vector<int> forbidden;  // tree edges mapped onto F
  std::vector<VertexSet> components;  // of H \ F
  std::vector<VertexSet> shattered;
  double shattered_bound = 0.0;  // 2 (p + l + 1) beta_param
  bool bound_holds = true;       // meaningful on good trees
  int flow_checks = 0;
  int flow_violations = 0;
};

// Good-tree test, shattered components of H \ F in T \ M^{-1}(F), and, on good
// trees, `flow_samples` random set pairs (A, B) from Z_F whose tree flow
// avoiding M^{-1}(F) must reach theta. `graph`, `h`, `f` and `tree` all live
// on the capacity graph.
StageDiagnostics stage_diagnostics(const FlexGraph& graph, const EdgeSet& h,
                                   const TreeEmbedding& tree, const ViolatingEdgeSet& f, int p,
                                   int l, double beta_param, double theta, Rng& rng,
                                   int flow_samples = 0);

// Per-violating-set statistics over `num_trees` sampled trees.
struct ViolatingSetStats {
  EdgeSet f;  // input ids
  int good = 0;
  int trees = 0;
  int max_shattered = 0;
  int bound_violations = 0;
  int flow_checks = 0;
  int flow_violations = 0;
};

struct DiagnosticRun {
  CapacityGraph capacity_graph;
  TreeDistribution distribution;
  std::vector<ViolatingSetStats> sets;
  double shattered_bound = 0.0;
};

// Builds the capacity graph of stage l on H itself (candidates with large
// values split rather than bought), samples `num_trees` trees and evaluates
// every violating set of H on each.
DiagnosticRun diagnose_stage(const FlexGraph& graph, const EdgeSet& h, const FractionalSolution& x,
                             int p, int l, const PipelineParams& params, int num_trees,
                             int flow_samples, std::uint64_t seed);

}  // namespace flexsndp
