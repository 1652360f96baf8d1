#include "flexsndp/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flexsndp/errors.hpp"

namespace flexsndp {

RoundingParams RoundingParams::for_tree(const TreeEmbedding& tree, double flow, double c_r) {
  RoundingParams params;
  params.flow = flow;
  params.height = std::max(1, tree.height());
  const double lg = std::log2(std::max(2, static_cast<int>(tree.leaf_of_vertex.size())));
  params.repetitions = std::max(1, static_cast<int>(std::ceil(c_r * params.height * lg)));
  return params;
}

TreeEdgeSet tree_round(const TreeEmbedding& tree, const std::vector<double>& y,
                       const RoundingParams& params, Rng& rng) {
  if (!(params.flow > 0.0)) throw PreconditionError("tree_round: flow parameter must be positive");
  if (params.repetitions < 1) throw PreconditionError("tree_round: need at least one repetition");
  const int m = tree.num_nodes();

  std::vector<double> prob(static_cast<std::size_t>(m), 0.0);
  for (int f = 1; f < m; ++f) {
    if (y[f] < 0.0) throw PreconditionError("tree_round: negative capacity");
    prob[f] = std::min(params.scale_cap, y[f] / params.flow);
  }
  // Conditional probability of keeping f given its parent edge was kept.
  std::vector<double> cond(static_cast<std::size_t>(m), 0.0);
  for (int f = 1; f < m; ++f) {
    const int parent = tree.nodes[f].parent;
    if (parent == 0) {
      cond[f] = prob[f];
    } else if (prob[parent] > 0.0) {
      cond[f] = std::min(1.0, prob[f] / prob[parent]);
    }
  }
  // Top-down, id-sorted within each depth.
  std::vector<int> order(static_cast<std::size_t>(m - 1));
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return tree.nodes[a].depth < tree.nodes[b].depth; });

  std::vector<bool> chosen(static_cast<std::size_t>(m), false);
  std::vector<bool> kept(static_cast<std::size_t>(m), false);
  for (int rep = 0; rep < params.repetitions; ++rep) {
    std::fill(kept.begin(), kept.end(), false);
    kept[0] = true;
    for (int f : order) {
      const int parent = tree.nodes[f].parent;
      const double u = uniform01(rng);
      if (kept[parent] && u < cond[f]) {
        kept[f] = true;
        chosen[f] = true;
      }
    }
  }
  TreeEdgeSet out;
  for (int f = 1; f < m; ++f) {
    if (chosen[f]) out.push_back(f);
  }
  return out;
}

EdgeSet map_to_graph(const TreeEmbedding& tree, const TreeEdgeSet& tree_edges) {
  EdgeSet out;
  for (int f : tree_edges) {
    if (f <= 0 || f >= tree.num_nodes()) throw PreconditionError("map_to_graph: invalid tree edge");
    out.insert(out.end(), tree.path[f].begin(), tree.path[f].end());
  }
  normalize(out);
  return out;
}

bool connects(const TreeEmbedding& tree, const TreeEdgeSet& tree_edges, const VertexSet& a,
              const VertexSet& b, const TreeEdgeSet& forbidden) {
  const int m = tree.num_nodes();
  std::vector<int> parent(static_cast<std::size_t>(m));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  TreeEdgeSet blocked = forbidden;
  std::sort(blocked.begin(), blocked.end());
  for (int f : tree_edges) {
    if (std::binary_search(blocked.begin(), blocked.end(), f)) continue;
    parent[find(f)] = find(tree.nodes[f].parent);
  }
  std::vector<bool> in_a(static_cast<std::size_t>(m), false);
  for (VertexId v : a) in_a[tree.leaf_of_vertex[v]] = true;
  for (VertexId v : b) {
    if (in_a[tree.leaf_of_vertex[v]]) throw PreconditionError("connects: A and B overlap");
  }
  std::vector<bool> a_root(static_cast<std::size_t>(m), false);
  for (VertexId v : a) a_root[find(tree.leaf_of_vertex[v])] = true;
  for (VertexId v : b) {
    if (a_root[find(tree.leaf_of_vertex[v])]) return true;
  }
  return false;
}

}  // namespace flexsndp
