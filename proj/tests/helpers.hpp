#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "flexsndp/embed.hpp"
#include "flexsndp/graph.hpp"
#include "flexsndp/rng.hpp"

namespace flexsndp::testing {

struct E {
  int u;
  int v;
  double cost = 1.0;
  bool safe = false;
};

inline FlexGraph make_graph(int n, std::initializer_list<E> list,
                            std::vector<TerminalPair> pairs = {{0, 1}}, int p = 1, int q = 0) {
  std::vector<Edge> edges;
  for (const E& e : list) {
    edges.push_back(Edge{static_cast<EdgeId>(edges.size()), e.u, e.v, e.cost, e.safe});
  }
  return FlexGraph(n, std::move(edges), std::move(pairs), p, q);
}

// Random multigraph: a spanning path plus `extra` random edges.
inline FlexGraph random_graph(std::uint64_t seed, int n, int extra, double safe_fraction = 0.5,
                              int num_pairs = 2, int p = 1, int q = 0) {
  Rng rng = make_rng(seed, "test-graph");
  auto pick = [&](int k) { return static_cast<int>(uniform01(rng) * k); };
  std::vector<Edge> edges;
  auto add = [&](int u, int v) {
    const double cost = 1.0 + pick(9);
    const bool safe = uniform01(rng) < safe_fraction;
    edges.push_back(Edge{static_cast<EdgeId>(edges.size()), u, v, cost, safe});
  };
  for (int v = 1; v < n; ++v) add(pick(v), v);
  for (int i = 0; i < extra; ++i) {
    const int u = pick(n);
    int v = pick(n - 1);
    if (v >= u) ++v;
    add(u, v);
  }
  std::vector<TerminalPair> pairs;
  for (int i = 0; i < num_pairs; ++i) {
    const int s = pick(n);
    int t = pick(n - 1);
    if (t >= s) ++t;
    pairs.push_back({s, t});
  }
  return FlexGraph(n, std::move(edges), std::move(pairs), p, q);
}

// Tree embedding from a parent array (parent[0] = -1). Leaves are assigned to
// graph vertices 0, 1, ... in node order; internal nodes map to vertex 0.
inline TreeEmbedding make_tree(const std::vector<int>& parent, const std::vector<double>& y) {
  TreeEmbedding t;
  const int m = static_cast<int>(parent.size());
  t.nodes.resize(static_cast<std::size_t>(m));
  for (int v = 0; v < m; ++v) {
    t.nodes[v].parent = parent[v];
    if (parent[v] >= 0) {
      t.nodes[v].depth = t.nodes[parent[v]].depth + 1;
      t.nodes[parent[v]].children.push_back(v);
    }
  }
  int next_vertex = 0;
  for (int v = 0; v < m; ++v) {
    if (t.nodes[v].children.empty()) {
      t.nodes[v].vertex = next_vertex++;
      t.leaf_of_vertex.push_back(v);
    } else {
      t.nodes[v].vertex = 0;
    }
  }
  t.y = y;
  t.path.assign(static_cast<std::size_t>(m), {});
  return t;
}

}  // namespace flexsndp::testing
