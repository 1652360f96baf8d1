#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace flexsndp {

using VertexId = int;
using EdgeId = int;

// Sorted, duplicate-free list of edge ids.
using EdgeSet = std::vector<EdgeId>;
using VertexSet = std::vector<VertexId>;

// Edge capacities indexed by edge id.
using CapacityMap = std::vector<double>;

// Tolerance for every flow comparison.
inline constexpr double kFlowEpsilon = 1e-9;

struct Edge {
  EdgeId id = 0;
  VertexId u = 0;
  VertexId v = 0;
  double cost = 0.0;
  bool safe = false;

  VertexId other(VertexId w) const { return w == u ? v : u; }
};

struct TerminalPair {
  VertexId s = 0;
  VertexId t = 0;
};

// Undirected multigraph whose edges are labelled safe or unsafe, together
// with the terminal pairs and the uniform (p, q) requirement. Edge ids are
// dense: edges()[i].id == i. Immutable after construction.
class FlexGraph {
 public:
  FlexGraph() = default;
  FlexGraph(int num_vertices, std::vector<Edge> edges,
            std::vector<TerminalPair> pairs, int p, int q);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId id) const { return edges_[static_cast<std::size_t>(id)]; }
  std::span<const TerminalPair> pairs() const { return pairs_; }
  int p() const { return p_; }
  int q() const { return q_; }

  EdgeSet all_edges() const;
  // Edges of `subset` that are unsafe / safe.
  EdgeSet unsafe_in(const EdgeSet& subset) const;
  EdgeSet safe_in(const EdgeSet& subset) const;
  double cost(const EdgeSet& subset) const;

  // Same graph with a different requirement.
  FlexGraph with_requirement(int p, int q) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<TerminalPair> pairs_;
  int p_ = 1;
  int q_ = 0;
};

// Vertex bipartition (S, V \ S).
class Cut {
 public:
  Cut() = default;
  explicit Cut(std::vector<bool> in_s) : in_s_(std::move(in_s)) {}
  static Cut from_vertices(int num_vertices, const VertexSet& s);

  bool contains(VertexId v) const { return in_s_[static_cast<std::size_t>(v)]; }
  int num_vertices() const { return static_cast<int>(in_s_.size()); }
  VertexSet members() const;
  bool separates(VertexId a, VertexId b) const { return contains(a) != contains(b); }
  // Nonempty and proper.
  bool is_proper() const;
  Cut complement() const;
  bool crosses(const Edge& e) const { return contains(e.u) != contains(e.v); }

  const std::vector<bool>& indicator() const { return in_s_; }
  friend bool operator==(const Cut&, const Cut&) = default;

 private:
  std::vector<bool> in_s_;
};

// Edge subset helpers. All inputs and outputs are sorted and duplicate-free.
void normalize(EdgeSet& set);
bool contains(const EdgeSet& set, EdgeId id);
EdgeSet set_union(const EdgeSet& a, const EdgeSet& b);
EdgeSet set_difference(const EdgeSet& a, const EdgeSet& b);
EdgeSet set_intersection(const EdgeSet& a, const EdgeSet& b);
std::vector<bool> to_mask(int num_edges, const EdgeSet& set);

// Dinic max-flow on an undirected network with double capacities. Each
// undirected edge may be used in either direction up to its capacity.
class FlowNetwork {
 public:
  explicit FlowNetwork(int num_nodes);

  int add_node();
  void add_undirected(int a, int b, double capacity);
  void add_arc(int from, int to, double capacity);
  double max_flow(int source, int sink);
  // Nodes reachable from the source in the residual network after max_flow;
  // the smallest minimum cut.
  std::vector<bool> source_side() const;
  int num_nodes() const { return static_cast<int>(adj_.size()); }

 private:
  struct Arc {
    int to;
    int rev;
    double cap;
  };

  bool bfs(int source, int sink);
  double dfs(int v, int sink, double pushed);

  std::vector<std::vector<Arc>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
  int source_ = -1;
};

struct FlowResult {
  double value = 0.0;
  // Minimum cut with A on the S side and B outside; smallest such side.
  Cut mincut;
};

// Exact max A-B flow (A and B contracted to single terminals) under `cap`.
FlowResult max_flow(const FlexGraph& graph, const CapacityMap& cap,
                    const VertexSet& a, const VertexSet& b);

// Edges of `restrict_to` with exactly one endpoint in S.
EdgeSet cut_boundary(const FlexGraph& graph, const Cut& s, const EdgeSet& restrict_to);

// Number of pairwise edge-disjoint s-t paths using only `edges`.
int edge_connectivity(const FlexGraph& graph, const EdgeSet& edges, VertexId s,
                      VertexId t);

// Same, returning also the smallest minimum cut on the s side.
struct ConnectivityResult {
  int value = 0;
  Cut mincut;
};
ConnectivityResult edge_connectivity_cut(const FlexGraph& graph,
                                         const std::vector<bool>& edge_mask,
                                         VertexId s, VertexId t);

// Connected-component label of every vertex using only edges in the mask.
std::vector<int> component_labels(const FlexGraph& graph,
                                  const std::vector<bool>& edge_mask);

}  // namespace flexsndp
