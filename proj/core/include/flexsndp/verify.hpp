#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "flexsndp/errors.hpp"
#include "flexsndp/graph.hpp"

namespace flexsndp {

// Removing `removed` (at most q unsafe edges) from the solution leaves pair
// `pair_index` with fewer than p edge-disjoint paths; `cut` is a cut that
// carries fewer than p of the remaining solution edges.
struct InfeasibilityWitness {
  EdgeSet removed;
  int pair_index = -1;
  Cut cut;

  std::string describe() const;
};

// Thrown when an operation requires (p, l)-flex-connectivity of its input.
class NotFlexConnectedError : public PreconditionError {
 public:
  NotFlexConnectedError(const std::string& what, InfeasibilityWitness witness)
      : PreconditionError(what), witness_(std::move(witness)) {}
  const InfeasibilityWitness& witness() const { return witness_; }

 private:
  InfeasibilityWitness witness_;
};

struct FlexCheck {
  bool connected = true;
  std::optional<InfeasibilityWitness> witness;

  explicit operator bool() const { return connected; }
};

// Decides whether every terminal pair is (p, q)-flex-connected in H: p-edge-
// connected after deleting any set of at most q unsafe edges of H. Unsafe
// subsets are enumerated in lexicographic id order; the first failure is
// reported, with `removed` trimmed to the deleted edges crossing the cut.
FlexCheck is_flex_connected(const FlexGraph& graph, const EdgeSet& h, int p, int q);

// A pair-separating cut S with |delta_H(S)| = p + l of which at most p - 1
// edges are safe, or nullopt when H is already (p, l + 1)-flex-connected.
// Throws NotFlexConnectedError when H is not (p, l)-flex-connected and
// `check_precondition` is set.
std::optional<Cut> find_violated_cut(const FlexGraph& graph, const EdgeSet& h, int p, int l,
                                     bool check_precondition = true);

// Boundary F = delta_H(S) of a violated cut.
struct ViolatingEdgeSet {
  EdgeSet edges;
  Cut witness;
  int pair_index = -1;
};

// Default cap on C(|H|, p + l) for enumerate_violating_sets.
inline constexpr std::size_t kDefaultEnumerationCap = 2'000'000;

// Every distinct violating edge set of H at stage l, ordered by edge-id set.
// Throws GuardError when C(|H|, p + l) exceeds `cap`.
std::vector<ViolatingEdgeSet> enumerate_violating_sets(
    const FlexGraph& graph, const EdgeSet& h, int p, int l,
    std::size_t cap = kDefaultEnumerationCap, bool check_precondition = true);

// True iff every terminal pair is connected in (H + H') - F.
bool is_feasible_augmentation(const FlexGraph& graph, const EdgeSet& h,
                              const ViolatingEdgeSet& f, const EdgeSet& h_prime);

// Tests whether `f` (a subset of H) is the boundary of some pair-separating
// cut; returns the cut and the separated pair when it is.
std::optional<std::pair<Cut, int>> boundary_witness(const FlexGraph& graph, const EdgeSet& h,
                                                    const EdgeSet& f);

// Binomial coefficient saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t k);

// Calls visit(subset) for every k-subset of `items` in lexicographic order;
// stops early when visit returns false.
template <typename Visit>
void for_each_combination(const std::vector<int>& items, int k, Visit&& visit) {
  const int n = static_cast<int>(items.size());
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::vector<int> subset(static_cast<std::size_t>(k));
  while (true) {
    for (int i = 0; i < k; ++i) subset[i] = items[idx[i]];
    if (!visit(subset)) return;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace flexsndp
