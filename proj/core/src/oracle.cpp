#include "flexsndp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <string>

#include "flexsndp/errors.hpp"

namespace flexsndp {

namespace {

using Word = std::uint64_t;

struct Bits {
  std::vector<Word> words;

  explicit Bits(int size = 0) : words(static_cast<std::size_t>((size + 63) / 64), 0) {}
  void set(int i) { words[i / 64] |= Word{1} << (i % 64); }
  void reset(int i) { words[i / 64] &= ~(Word{1} << (i % 64)); }
  bool test(int i) const { return (words[i / 64] >> (i % 64)) & 1U; }
};

int count_and(const Bits& a, const Bits& b) {
  int c = 0;
  for (std::size_t i = 0; i < a.words.size(); ++i) c += std::popcount(a.words[i] & b.words[i]);
  return c;
}

int count_and3(const Bits& a, const Bits& b, const Bits& c) {
  int k = 0;
  for (std::size_t i = 0; i < a.words.size(); ++i) {
    k += std::popcount(a.words[i] & b.words[i] & c.words[i]);
  }
  return k;
}

// Every bipartition (S, V \ S) with vertex n-1 outside S that separates at
// least one terminal pair.
struct CutTable {
  std::vector<std::uint32_t> sides;  // bit v set iff v in S
  std::vector<Bits> crossing;
  std::vector<int> first_pair;  // smallest separated pair index
  Bits safe;
  int num_edges = 0;
};

CutTable build_cut_table(const FlexGraph& graph) {
  const int n = graph.num_vertices();
  if (n > kOracleMaxVertices) {
    throw GuardError("oracle: " + std::to_string(n) + " vertices exceed the cut enumeration guard");
  }
  CutTable table;
  table.num_edges = graph.num_edges();
  table.safe = Bits(table.num_edges);
  for (const Edge& e : graph.edges()) {
    if (e.safe) table.safe.set(e.id);
  }
  const std::uint32_t limit = n >= 1 ? (std::uint32_t{1} << (n - 1)) : 0;
  for (std::uint32_t s = 1; s < limit; ++s) {
    int pair = -1;
    const auto pairs = graph.pairs();
    for (int i = 0; i < static_cast<int>(pairs.size()); ++i) {
      if (((s >> pairs[i].s) & 1U) != ((s >> pairs[i].t) & 1U)) {
        pair = i;
        break;
      }
    }
    if (pair < 0) continue;
    Bits cross(table.num_edges);
    for (const Edge& e : graph.edges()) {
      if (((s >> e.u) & 1U) != ((s >> e.v) & 1U)) cross.set(e.id);
    }
    table.sides.push_back(s);
    table.crossing.push_back(std::move(cross));
    table.first_pair.push_back(pair);
  }
  return table;
}

bool table_feasible(const CutTable& table, const Bits& chosen, int p, int q) {
  for (const Bits& cross : table.crossing) {
    if (count_and(chosen, cross) >= p + q) continue;
    if (count_and3(chosen, cross, table.safe) >= p) continue;
    return false;
  }
  return true;
}

Cut cut_from_side(int n, std::uint32_t side) {
  std::vector<bool> in(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) in[v] = (side >> v) & 1U;
  return Cut(std::move(in));
}

// Branch and bound over `free_edges` on top of `fixed`.
OptimumResult search_optimum(const FlexGraph& graph, const CutTable& table, const EdgeSet& fixed,
                             const EdgeSet& free_edges, int p, int q) {
  const int m = graph.num_edges();
  Bits chosen(m);
  for (EdgeId id : fixed) chosen.set(id);
  Bits optimistic = chosen;
  for (EdgeId id : free_edges) optimistic.set(id);
  if (!table_feasible(table, optimistic, p, q)) {
    throw InfeasibleError("oracle: no feasible solution exists");
  }

  double best = std::numeric_limits<double>::infinity();
  EdgeSet best_set;
  EdgeSet current;
  const int k = static_cast<int>(free_edges.size());

  auto consider = [&](double cost) {
    // `current` is built in increasing id order.
    if (cost < best - 1e-9 || (cost <= best + 1e-9 && current < best_set)) {
      best = std::min(best, cost);
      best_set = current;
    }
  };

  // Recursion depth is at most the number of free edges.
  auto dfs = [&](auto&& self, int idx, double cost) -> void {
    if (cost > best + 1e-9) return;
    if (idx == k) {
      if (table_feasible(table, chosen, p, q)) consider(cost);
      return;
    }
    const EdgeId e = free_edges[idx];
    // Take e.
    chosen.set(e);
    current.push_back(e);
    self(self, idx + 1, cost + graph.edge(e).cost);
    current.pop_back();
    chosen.reset(e);
    // Skip e, if everything still undecided can restore feasibility.
    optimistic.reset(e);
    if (table_feasible(table, optimistic, p, q)) self(self, idx + 1, cost);
    optimistic.set(e);
  };
  dfs(dfs, 0, 0.0);

  OptimumResult result;
  result.edges = best_set;
  result.cost = graph.cost(best_set);
  return result;
}

}  // namespace

OptimumResult brute_force_optimum(const FlexGraph& graph, int p, int q, int max_edges) {
  if (graph.num_edges() > max_edges) {
    throw GuardError("brute_force_optimum: " + std::to_string(graph.num_edges()) +
                     " edges exceed the guard of " + std::to_string(max_edges));
  }
  const CutTable table = build_cut_table(graph);
  return search_optimum(graph, table, {}, graph.all_edges(), p, q);
}

OptimumResult brute_force_augmentation(const FlexGraph& graph, const EdgeSet& h, int p, int l,
                                       int max_candidates) {
  const EdgeSet candidates = set_difference(graph.all_edges(), h);
  if (static_cast<int>(candidates.size()) > max_candidates) {
    throw GuardError("brute_force_augmentation: " + std::to_string(candidates.size()) +
                     " candidate edges exceed the guard of " + std::to_string(max_candidates));
  }
  const CutTable table = build_cut_table(graph);
  return search_optimum(graph, table, h, candidates, p, l + 1);
}

std::optional<Cut> brute_force_separation(const FractionalSolution& x, const FlexGraph& graph,
                                          const EdgeSet& h, int p, int l, double eps_sep) {
  const CutTable table = build_cut_table(graph);
  Bits in_h(graph.num_edges());
  for (EdgeId id : h) in_h.set(id);
  for (std::size_t c = 0; c < table.sides.size(); ++c) {
    const Bits& cross = table.crossing[c];
    if (count_and(in_h, cross) != p + l) continue;
    if (count_and3(in_h, cross, table.safe) > p - 1) continue;
    double coverage = 0.0;
    for (const Edge& e : graph.edges()) {
      if (cross.test(e.id) && !in_h.test(e.id)) coverage += x.x[e.id];
    }
    if (coverage < 1.0 - eps_sep) return cut_from_side(graph.num_vertices(), table.sides[c]);
  }
  return std::nullopt;
}

std::vector<ViolatingEdgeSet> brute_force_violated_structure(const FlexGraph& graph,
                                                             const EdgeSet& h, int p, int l) {
  const CutTable table = build_cut_table(graph);
  Bits in_h(graph.num_edges());
  for (EdgeId id : h) in_h.set(id);
  std::map<EdgeSet, ViolatingEdgeSet> found;
  for (std::size_t c = 0; c < table.sides.size(); ++c) {
    const Bits& cross = table.crossing[c];
    if (count_and(in_h, cross) != p + l) continue;
    if (count_and3(in_h, cross, table.safe) > p - 1) continue;
    EdgeSet f;
    for (EdgeId id : h) {
      if (cross.test(id)) f.push_back(id);
    }
    if (found.count(f) == 0) {
      found.emplace(f, ViolatingEdgeSet{f, cut_from_side(graph.num_vertices(), table.sides[c]),
                                        table.first_pair[c]});
    }
  }
  std::vector<ViolatingEdgeSet> out;
  for (auto& [key, value] : found) out.push_back(std::move(value));
  return out;
}

bool brute_force_is_flex_connected(const FlexGraph& graph, const EdgeSet& h, int p, int q) {
  const CutTable table = build_cut_table(graph);
  Bits chosen(graph.num_edges());
  for (EdgeId id : h) chosen.set(id);
  return table_feasible(table, chosen, p, q);
}

}  // namespace flexsndp
