#include "flexsndp/verify.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace flexsndp {

std::string InfeasibilityWitness::describe() const {
  std::ostringstream os;
  os << "pair " << pair_index << " loses p-connectivity after removing {";
  for (std::size_t i = 0; i < removed.size(); ++i) os << (i ? "," : "") << removed[i];
  os << "}; cut S = {";
  const VertexSet s = cut.members();
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << "}";
  return os.str();
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t num = n - k + i;
    if (r > std::numeric_limits<std::size_t>::max() / num) {
      return std::numeric_limits<std::size_t>::max();
    }
    r = r * num / i;
  }
  return r;
}

FlexCheck is_flex_connected(const FlexGraph& graph, const EdgeSet& h, int p, int q) {
  const std::vector<bool> h_mask = to_mask(graph.num_edges(), h);
  const std::vector<bool> safe_mask = to_mask(graph.num_edges(), graph.safe_in(h));
  const auto pairs = graph.pairs();

  // A pair with p + q edge-disjoint paths, or p safe ones, survives any
  // deletion of q unsafe edges.
  std::vector<int> hard;
  for (int i = 0; i < static_cast<int>(pairs.size()); ++i) {
    const auto& pr = pairs[i];
    if (edge_connectivity_cut(graph, h_mask, pr.s, pr.t).value >= p + q) continue;
    if (edge_connectivity_cut(graph, safe_mask, pr.s, pr.t).value >= p) continue;
    hard.push_back(i);
  }
  FlexCheck result;
  if (hard.empty()) return result;

  // Deleting more edges never helps connectivity, so subsets of exactly
  // min(q, |U|) edges decide the question.
  const EdgeSet unsafe = graph.unsafe_in(h);
  const int k = std::min<int>(q, static_cast<int>(unsafe.size()));
  std::vector<bool> mask = h_mask;
  for_each_combination(unsafe, k, [&](const std::vector<int>& removed) {
    for (EdgeId id : removed) mask[id] = false;
    for (int i : hard) {
      const auto& pr = pairs[i];
      ConnectivityResult c = edge_connectivity_cut(graph, mask, pr.s, pr.t);
      if (c.value < p) {
        InfeasibilityWitness w;
        for (EdgeId id : removed) {
          if (c.mincut.crosses(graph.edge(id))) w.removed.push_back(id);
        }
        w.pair_index = i;
        w.cut = std::move(c.mincut);
        result.connected = false;
        result.witness = std::move(w);
        break;
      }
    }
    for (EdgeId id : removed) mask[id] = true;
    return result.connected;
  });
  return result;
}

std::optional<Cut> find_violated_cut(const FlexGraph& graph, const EdgeSet& h, int p, int l,
                                     bool check_precondition) {
  if (check_precondition) {
    FlexCheck pre = is_flex_connected(graph, h, p, l);
    if (!pre) {
      throw NotFlexConnectedError("find_violated_cut: H is not (p,l)-flex-connected: " +
                                      pre.witness->describe(),
                                  *pre.witness);
    }
  }
  const EdgeSet unsafe = graph.unsafe_in(h);
  if (static_cast<int>(unsafe.size()) < l + 1) return std::nullopt;
  FlexCheck next = is_flex_connected(graph, h, p, l + 1);
  if (next) return std::nullopt;

  Cut s = next.witness->cut;
  const EdgeSet boundary = cut_boundary(graph, s, h);
  const auto safe_count = graph.safe_in(boundary).size();
  if (static_cast<int>(boundary.size()) != p + l || static_cast<int>(safe_count) > p - 1) {
    throw NotFlexConnectedError(
        "find_violated_cut: H is not (p,l)-flex-connected: " + next.witness->describe(),
        *next.witness);
  }
  return s;
}

std::optional<std::pair<Cut, int>> boundary_witness(const FlexGraph& graph, const EdgeSet& h,
                                                    const EdgeSet& f) {
  const int n = graph.num_vertices();
  std::vector<bool> mask = to_mask(graph.num_edges(), h);
  for (EdgeId id : f) mask[id] = false;
  const std::vector<int> comp = component_labels(graph, mask);
  int num_comp = 0;
  for (int c : comp) num_comp = std::max(num_comp, c + 1);

  // Components are nodes, F edges must all be bichromatic.
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(num_comp));
  for (EdgeId id : f) {
    const Edge& e = graph.edge(id);
    const int a = comp[e.u];
    const int b = comp[e.v];
    if (a == b) return std::nullopt;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> color(static_cast<std::size_t>(num_comp), -1);
  std::vector<int> piece(static_cast<std::size_t>(num_comp), -1);
  int num_pieces = 0;
  for (int c = 0; c < num_comp; ++c) {
    if (color[c] >= 0) continue;
    color[c] = 0;
    piece[c] = num_pieces;
    std::vector<int> stack{c};
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (int b : adj[a]) {
        if (color[b] < 0) {
          color[b] = 1 - color[a];
          piece[b] = num_pieces;
          stack.push_back(b);
        } else if (color[b] == color[a]) {
          return std::nullopt;
        }
      }
    }
    ++num_pieces;
  }

  const auto pairs = graph.pairs();
  for (int i = 0; i < static_cast<int>(pairs.size()); ++i) {
    const int cs = comp[pairs[i].s];
    const int ct = comp[pairs[i].t];
    if (cs == ct) continue;
    if (piece[cs] == piece[ct] && color[cs] == color[ct]) continue;
    std::vector<int> side = color;
    if (color[cs] == color[ct]) {
      for (int c = 0; c < num_comp; ++c) {
        if (piece[c] == piece[ct]) side[c] = 1 - side[c];
      }
    }
    std::vector<bool> in_s(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) in_s[v] = side[comp[v]] == side[cs];
    return std::make_pair(Cut(std::move(in_s)), i);
  }
  return std::nullopt;
}

std::vector<ViolatingEdgeSet> enumerate_violating_sets(const FlexGraph& graph, const EdgeSet& h,
                                                       int p, int l, std::size_t cap,
                                                       bool check_precondition) {
  const int size = p + l;
  if (binomial(h.size(), static_cast<std::size_t>(size)) > cap) {
    throw GuardError("enumerate_violating_sets: C(" + std::to_string(h.size()) + "," +
                     std::to_string(size) + ") exceeds the enumeration cap");
  }
  if (check_precondition) {
    FlexCheck pre = is_flex_connected(graph, h, p, l);
    if (!pre) {
      throw NotFlexConnectedError("enumerate_violating_sets: H is not (p,l)-flex-connected: " +
                                      pre.witness->describe(),
                                  *pre.witness);
    }
  }
  std::vector<ViolatingEdgeSet> out;
  for_each_combination(h, size, [&](const std::vector<int>& f) {
    int safe = 0;
    for (EdgeId id : f) safe += graph.edge(id).safe ? 1 : 0;
    if (safe > p - 1) return true;
    if (auto w = boundary_witness(graph, h, f)) {
      out.push_back(ViolatingEdgeSet{f, std::move(w->first), w->second});
    }
    return true;
  });
  return out;
}

bool is_feasible_augmentation(const FlexGraph& graph, const EdgeSet& h, const ViolatingEdgeSet& f,
                              const EdgeSet& h_prime) {
  std::vector<bool> mask = to_mask(graph.num_edges(), set_union(h, h_prime));
  for (EdgeId id : f.edges) mask[id] = false;
  const std::vector<int> comp = component_labels(graph, mask);
  for (const TerminalPair& pr : graph.pairs()) {
    if (comp[pr.s] != comp[pr.t]) return false;
  }
  return true;
}

}  // namespace flexsndp
