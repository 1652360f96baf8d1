#pragma once

#include <vector>

#include "flexsndp/embed.hpp"
#include "flexsndp/graph.hpp"
#include "flexsndp/rng.hpp"

namespace flexsndp {

// Tree edges are named by their child node (see TreeEmbedding).
using TreeEdgeSet = std::vector<int>;

struct RoundingParams {
  double flow = 1.0;  // f in (0, 1]
  int height = 1;
  int repetitions = 1;  // R
  // Per-edge probabilities are min(scale_cap, y / f).
  double scale_cap = 1.0;

  // R = ceil(c_r * h * log2 n), at least 1.
  static RoundingParams for_tree(const TreeEmbedding& tree, double flow, double c_r = 2.0);
};

// Oblivious dependent rounding on a rooted capacitated tree. With
// p_e = min(1, y_e / f), each of R independent repetitions keeps a root edge
// with probability p_e and a deeper edge, given that its parent edge was
// kept, with probability min(1, p_e / p_parent). Edges are visited top-down
// in id order within each depth. The output is the union over repetitions and
// depends only on (tree, y, params, rng).
TreeEdgeSet tree_round(const TreeEmbedding& tree, const std::vector<double>& y,
                       const RoundingParams& params, Rng& rng);

// Union of the graph paths of the given tree edges.
EdgeSet map_to_graph(const TreeEmbedding& tree, const TreeEdgeSet& tree_edges);

// True iff `tree_edges` minus `forbidden` contains a path in the tree from a
// leaf of A to a leaf of B.
bool connects(const TreeEmbedding& tree, const TreeEdgeSet& tree_edges, const VertexSet& a,
              const VertexSet& b, const TreeEdgeSet& forbidden = {});

}  // namespace flexsndp
