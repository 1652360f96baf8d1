#pragma once

#include <optional>
#include <vector>

#include "flexsndp/graph.hpp"
#include "flexsndp/lp.hpp"
#include "flexsndp/verify.hpp"

namespace flexsndp {

// Brute-force ground truth for small instances. Everything here works from
// the explicit list of vertex bipartitions and never calls the max-flow based
// routines of the verify and lp modules.

inline constexpr int kOracleMaxEdges = 22;
inline constexpr int kOracleMaxVertices = 14;

struct OptimumResult {
  EdgeSet edges;
  double cost = 0.0;
};

// Minimum-cost H with every pair (p, q)-flex-connected. Ties are broken by the
// lexicographically smallest edge-id list. Throws GuardError beyond
// `max_edges` edges or kOracleMaxVertices vertices, InfeasibleError when G
// itself is infeasible.
OptimumResult brute_force_optimum(const FlexGraph& graph, int p, int q,
                                  int max_edges = kOracleMaxEdges);

// Minimum-cost H' in E \ H with H + H' (p, l + 1)-flex-connected.
OptimumResult brute_force_augmentation(const FlexGraph& graph, const EdgeSet& h, int p, int l,
                                       int max_candidates = kOracleMaxEdges);

// A violated cut of H at stage l (pair-separating, |delta_H| = p + l, at most
// p - 1 safe) covered by x less than 1 - eps_sep, scanning all 2^{n-1}
// bipartitions; nullopt if none.
std::optional<Cut> brute_force_separation(const FractionalSolution& x, const FlexGraph& graph,
                                          const EdgeSet& h, int p, int l,
                                          double eps_sep = kSeparationEpsilon);

// All violating edge sets of H at stage l, from the full list of cuts.
std::vector<ViolatingEdgeSet> brute_force_violated_structure(const FlexGraph& graph,
                                                             const EdgeSet& h, int p, int l);

// Cut-condition check: every pair-separating cut carries at least p safe
// edges of H or at least p + q edges of H.
bool brute_force_is_flex_connected(const FlexGraph& graph, const EdgeSet& h, int p, int q);

}  // namespace flexsndp
