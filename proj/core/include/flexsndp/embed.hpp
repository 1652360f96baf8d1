#pragma once

#include <string>
#include <vector>

#include "flexsndp/errors.hpp"
#include "flexsndp/graph.hpp"
#include "flexsndp/rng.hpp"

namespace flexsndp {

using Metric = std::vector<std::vector<double>>;

// ---------------------------------------------------------------------------
// Hierarchical decomposition of a finite metric (FRT).

struct DecompositionTree {
  struct Node {
    int parent = -1;
    int center = -1;       // point whose ball formed the cluster
    double length = 0.0;   // length of the edge to the parent
    std::vector<int> members;
    std::vector<int> children;
  };
  std::vector<Node> nodes;  // nodes[0] is the root
  std::vector<int> leaf_of_point;

  double distance(int a, int b) const;
  int height() const;
};

// Random laminar decomposition of `metric` with geometrically shrinking
// cluster radii. Tree distances dominate metric distances on every sample;
// the expected stretch is O(log n). Throws PreconditionError if `metric`
// is not a finite semimetric.
DecompositionTree frt_embed(const Metric& metric, Rng& rng);

// ---------------------------------------------------------------------------
// Capacitated tree embeddings.

// Parallel edges with positive capacity grouped by endpoint pair. A bundle is
// named by its representative, the smallest edge id it contains.
struct Bundles {
  std::vector<int> bundle_of_edge;  // -1 for edges with zero capacity
  std::vector<std::vector<EdgeId>> members;
  std::vector<double> capacity;
  std::vector<EdgeId> representative;
};
Bundles make_bundles(const FlexGraph& graph, const CapacityMap& capacity);

// Tree T with leaves in bijection with V(G). Tree edges are named by their
// child node; node 0 is the root. `path[f]` is a walk in G from the image of
// f's child to the image of its parent. When `bundled` is set, each hop is a
// bundle representative and the hop's flow is split across the bundle in
// proportion to capacity (equivalently, a mixture of single-path embeddings).
struct TreeEmbedding {
  struct Node {
    int parent = -1;
    VertexId vertex = -1;
    int depth = 0;
    std::vector<int> children;
  };
  std::vector<Node> nodes;
  std::vector<int> leaf_of_vertex;
  std::vector<double> y;                    // capacity per tree edge, y[0] = 0
  std::vector<std::vector<EdgeId>> path;    // per tree edge, path[0] empty
  bool bundled = false;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  bool is_leaf(int node) const { return nodes[node].children.empty(); }
  int height() const;
  // Graph vertices whose leaves lie below `node`.
  VertexSet vertices_below(int node) const;
  // Tree edges (child node ids, sorted) whose path uses one of `edges`.
  std::vector<int> preimage(const EdgeSet& edges, const Bundles* bundles = nullptr) const;
};

// Capacity of the cut induced in G by removing tree edge f.
double induced_cut_capacity(const TreeEmbedding& tree, const FlexGraph& graph,
                            const CapacityMap& capacity, int tree_edge);

struct TreeDistribution {
  std::vector<TreeEmbedding> trees;
  std::vector<double> weights;
  double congestion = 0.0;  // max over edges of the weight-averaged rload
  Bundles bundles;
  CapacityMap capacity;
  int iterations = 0;
};

struct RackeOptions {
  double c_beta = 4.0;
  double c_h = 4.0;
  int c_iter = 8;
  // Congestion target; <= 0 means c_beta * max(1, ceil(log2 n)).
  double target = 0.0;
};

// c_beta * max(1, ceil(log2 n)).
double beta_parameter(int num_vertices, double c_beta);

class CongestionError : public ConvergenceError {
 public:
  CongestionError(const std::string& what, double achieved)
      : ConvergenceError(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

// Distribution over tree embeddings of (G, capacity) built by multiplicative
// weights: each round embeds the length metric exp(r_e) / capacity_e with
// frt_embed, maps internal nodes to cluster centers and tree edges to
// shortest paths, and raises r_e by the round's weight times its relative
// load. Stops when the weights sum to one or after c_iter * n rounds. Edges
// of zero capacity are ignored. Throws CongestionError when the measured
// congestion exceeds the target.
TreeDistribution build_racke_distribution(const FlexGraph& graph, const CapacityMap& capacity,
                                          Rng& rng, const RackeOptions& options = {});

// Draws a tree with probability proportional to its weight and resolves every
// bundled hop to one concrete edge chosen in proportion to capacity.
TreeEmbedding sample_tree(const TreeDistribution& dist, Rng& rng);

// Max flow between the leaves of A and of B in T with capacities y (indexed
// by tree edge) after deleting `forbidden` tree edges.
double tree_maxflow(const TreeEmbedding& tree, const std::vector<double>& y, const VertexSet& a,
                    const VertexSet& b, const std::vector<int>& forbidden = {});

struct LoadReport {
  std::vector<double> load;   // per graph edge
  std::vector<double> rload;  // load / capacity
  double max_rload = 0.0;
};

LoadReport loads(const TreeEmbedding& tree, const FlexGraph& graph, const CapacityMap& capacity);
// Weight-averaged load and rload; max_rload is the congestion.
LoadReport loads(const TreeDistribution& dist, const FlexGraph& graph);

// Ratio of the largest to the smallest positive capacity.
double capacity_ratio(const CapacityMap& capacity);

// Debug dump of a distribution (trees, mappings, y, loads) as JSON.
std::string distribution_to_json(const TreeDistribution& dist, const FlexGraph& graph);

}  // namespace flexsndp
