#pragma once

#include <optional>
#include <span>
#include <vector>

#include "flexsndp/graph.hpp"

namespace flexsndp {

inline constexpr double kLpEpsilon = 1e-7;
inline constexpr double kSeparationEpsilon = 1e-6;

// Values of the augmentation variables. `x` is indexed by edge id and is zero
// on the edges of the partial solution H.
struct FractionalSolution {
  std::vector<double> x;
  double objective = 0.0;

  double coverage(const EdgeSet& edges) const;
};

// Covering constraint x(delta_{E \ H}(S)) >= 1 of a violated cut S.
struct CutConstraint {
  EdgeSet edges;
  Cut cut;
};

// Minimizes sum c_e x_e subject to every pooled constraint and 0 <= x <= 1.
// Costs are indexed by edge id. Throws InfeasibleError if a constraint has
// empty support.
FractionalSolution lp_solve(std::span<const CutConstraint> pool, const std::vector<double>& costs,
                            double eps_lp = kLpEpsilon);

// Looks for a violated cut S of H (stage l) that `x` covers by less than
// 1 - eps_sep. For every set B of exactly l + 1 unsafe edges of H (in
// lexicographic order) and every terminal pair, a minimum s-t cut is taken
// under capacities K on H \ B, 0 on B and x on E \ H, with
// K = 1 + sum x. A cut of value below (p - 1) K + 1 - eps_sep has exactly
// p - 1 edges of H \ B and all of B on its boundary, hence is violated.
// Returns the first such cut. Throws InfeasibleError if a violated cut has
// no candidate edge crossing it.
std::optional<CutConstraint> separation_oracle(const FractionalSolution& x,
                                               const FlexGraph& graph, const EdgeSet& h, int p,
                                               int l, double eps_sep = kSeparationEpsilon);

// Same sweep, collecting every distinct violated constraint found.
std::vector<CutConstraint> separate_all(const FractionalSolution& x, const FlexGraph& graph,
                                        const EdgeSet& h, int p, int l,
                                        double eps_sep = kSeparationEpsilon);

struct AugmentLpOptions {
  double eps_lp = kLpEpsilon;
  double eps_sep = kSeparationEpsilon;
  int max_rounds = 500;
  bool check_precondition = true;
  // Spread the mass of parallel candidate edges of equal cost evenly; they
  // cross exactly the same cuts, so the solution stays optimal.
  bool balance_parallel = true;
};

struct AugmentLpResult {
  FractionalSolution solution;
  std::vector<CutConstraint> pool;
  int rounds = 0;
  // Objective after each round of constraint generation.
  std::vector<double> objective_trace;
};

// Solves the augmentation LP of stage l by constraint generation starting
// from `initial_pool`.
AugmentLpResult solve_augment_lp(const FlexGraph& graph, const EdgeSet& h, int p, int l,
                                 const AugmentLpOptions& options = {},
                                 std::vector<CutConstraint> initial_pool = {});

}  // namespace flexsndp
