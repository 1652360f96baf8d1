#include "flexsndp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "flexsndp/errors.hpp"

namespace flexsndp {

FlexGraph::FlexGraph(int num_vertices, std::vector<Edge> edges,
                     std::vector<TerminalPair> pairs, int p, int q)
    : n_(num_vertices), edges_(std::move(edges)), pairs_(std::move(pairs)), p_(p), q_(q) {
  if (n_ < 1) throw PreconditionError("graph needs at least one vertex");
  if (p_ < 1) throw PreconditionError("p must be at least 1");
  if (q_ < 0) throw PreconditionError("q must be non-negative");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.id != static_cast<EdgeId>(i)) {
      throw PreconditionError("edge ids must be dense and ordered; edge at position " +
                              std::to_string(i) + " has id " + std::to_string(e.id));
    }
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_) {
      throw PreconditionError("edge " + std::to_string(e.id) + " has an invalid endpoint");
    }
    if (e.u == e.v) throw PreconditionError("edge " + std::to_string(e.id) + " is a self-loop");
    if (!std::isfinite(e.cost) || e.cost < 0.0) {
      throw PreconditionError("edge " + std::to_string(e.id) + " has an invalid cost");
    }
  }
  for (const TerminalPair& pr : pairs_) {
    if (pr.s < 0 || pr.s >= n_ || pr.t < 0 || pr.t >= n_) {
      throw PreconditionError("terminal pair references an invalid vertex");
    }
    if (pr.s == pr.t) throw PreconditionError("terminal pair with s == t");
  }
}

EdgeSet FlexGraph::all_edges() const {
  EdgeSet all(edges_.size());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

EdgeSet FlexGraph::unsafe_in(const EdgeSet& subset) const {
  EdgeSet out;
  for (EdgeId id : subset) {
    if (!edge(id).safe) out.push_back(id);
  }
  return out;
}

EdgeSet FlexGraph::safe_in(const EdgeSet& subset) const {
  EdgeSet out;
  for (EdgeId id : subset) {
    if (edge(id).safe) out.push_back(id);
  }
  return out;
}

double FlexGraph::cost(const EdgeSet& subset) const {
  double total = 0.0;
  for (EdgeId id : subset) total += edge(id).cost;
  return total;
}

FlexGraph FlexGraph::with_requirement(int p, int q) const {
  return FlexGraph(n_, edges_, pairs_, p, q);
}

Cut Cut::from_vertices(int num_vertices, const VertexSet& s) {
  std::vector<bool> in(static_cast<std::size_t>(num_vertices), false);
  for (VertexId v : s) in[static_cast<std::size_t>(v)] = true;
  return Cut(std::move(in));
}

VertexSet Cut::members() const {
  VertexSet out;
  for (std::size_t v = 0; v < in_s_.size(); ++v) {
    if (in_s_[v]) out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

bool Cut::is_proper() const {
  const auto k = std::count(in_s_.begin(), in_s_.end(), true);
  return k > 0 && k < static_cast<std::ptrdiff_t>(in_s_.size());
}

Cut Cut::complement() const {
  std::vector<bool> flipped = in_s_;
  flipped.flip();
  return Cut(std::move(flipped));
}

void normalize(EdgeSet& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

bool contains(const EdgeSet& set, EdgeId id) {
  return std::binary_search(set.begin(), set.end(), id);
}

EdgeSet set_union(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

EdgeSet set_difference(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

EdgeSet set_intersection(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<bool> to_mask(int num_edges, const EdgeSet& set) {
  std::vector<bool> mask(static_cast<std::size_t>(num_edges), false);
  for (EdgeId id : set) mask[static_cast<std::size_t>(id)] = true;
  return mask;
}

// ---------------------------------------------------------------------------
// FlowNetwork

FlowNetwork::FlowNetwork(int num_nodes) : adj_(static_cast<std::size_t>(num_nodes)) {}

int FlowNetwork::add_node() {
  adj_.emplace_back();
  return static_cast<int>(adj_.size()) - 1;
}

void FlowNetwork::add_undirected(int a, int b, double capacity) {
  if (capacity <= 0.0) return;
  auto& la = adj_[static_cast<std::size_t>(a)];
  auto& lb = adj_[static_cast<std::size_t>(b)];
  la.push_back({b, static_cast<int>(lb.size()), capacity});
  lb.push_back({a, static_cast<int>(la.size()) - 1, capacity});
}

void FlowNetwork::add_arc(int from, int to, double capacity) {
  if (capacity <= 0.0) return;
  auto& lf = adj_[static_cast<std::size_t>(from)];
  auto& lt = adj_[static_cast<std::size_t>(to)];
  lf.push_back({to, static_cast<int>(lt.size()), capacity});
  lt.push_back({from, static_cast<int>(lf.size()) - 1, 0.0});
}

bool FlowNetwork::bfs(int source, int sink) {
  level_.assign(adj_.size(), -1);
  std::queue<int> queue;
  level_[static_cast<std::size_t>(source)] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (const Arc& a : adj_[static_cast<std::size_t>(v)]) {
      if (a.cap > kFlowEpsilon && level_[static_cast<std::size_t>(a.to)] < 0) {
        level_[static_cast<std::size_t>(a.to)] = level_[static_cast<std::size_t>(v)] + 1;
        queue.push(a.to);
      }
    }
  }
  return level_[static_cast<std::size_t>(sink)] >= 0;
}

double FlowNetwork::dfs(int v, int sink, double pushed) {
  if (v == sink) return pushed;
  auto& arcs = adj_[static_cast<std::size_t>(v)];
  for (std::size_t& i = next_[static_cast<std::size_t>(v)]; i < arcs.size(); ++i) {
    Arc& a = arcs[i];
    if (a.cap <= kFlowEpsilon ||
        level_[static_cast<std::size_t>(a.to)] != level_[static_cast<std::size_t>(v)] + 1) {
      continue;
    }
    const double got = dfs(a.to, sink, std::min(pushed, a.cap));
    if (got > 0.0) {
      a.cap -= got;
      adj_[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.rev)].cap += got;
      return got;
    }
  }
  return 0.0;
}

double FlowNetwork::max_flow(int source, int sink) {
  source_ = source;
  if (source == sink) throw PreconditionError("max_flow: source equals sink");
  double total = 0.0;
  while (bfs(source, sink)) {
    next_.assign(adj_.size(), 0);
    while (true) {
      const double pushed = dfs(source, sink, std::numeric_limits<double>::infinity());
      if (pushed <= 0.0) break;
      total += pushed;
    }
  }
  return total;
}

std::vector<bool> FlowNetwork::source_side() const {
  std::vector<bool> seen(adj_.size(), false);
  if (source_ < 0) return seen;
  std::vector<int> stack{source_};
  seen[static_cast<std::size_t>(source_)] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const Arc& a : adj_[static_cast<std::size_t>(v)]) {
      if (a.cap > kFlowEpsilon && !seen[static_cast<std::size_t>(a.to)]) {
        seen[static_cast<std::size_t>(a.to)] = true;
        stack.push_back(a.to);
      }
    }
  }
  return seen;
}

// ---------------------------------------------------------------------------

FlowResult max_flow(const FlexGraph& graph, const CapacityMap& cap, const VertexSet& a,
                    const VertexSet& b) {
  const int n = graph.num_vertices();
  if (a.empty() || b.empty()) throw PreconditionError("max_flow: terminal sets must be nonempty");
  if (cap.size() != static_cast<std::size_t>(graph.num_edges())) {
    throw PreconditionError("max_flow: capacity map does not match the edge set");
  }
  std::vector<char> side(static_cast<std::size_t>(n), 0);
  for (VertexId v : a) side[static_cast<std::size_t>(v)] = 1;
  for (VertexId v : b) {
    if (side[static_cast<std::size_t>(v)] == 1) {
      throw PreconditionError("max_flow: terminal sets overlap at vertex " + std::to_string(v));
    }
    side[static_cast<std::size_t>(v)] = 2;
  }

  FlowNetwork net(n + 2);
  const int source = n;
  const int sink = n + 1;
  const double inf = std::numeric_limits<double>::infinity();
  for (VertexId v : a) net.add_arc(source, v, inf);
  for (VertexId v : b) net.add_arc(v, sink, inf);
  for (const Edge& e : graph.edges()) {
    const double c = cap[static_cast<std::size_t>(e.id)];
    if (c < 0.0 || !std::isfinite(c)) {
      throw PreconditionError("max_flow: invalid capacity on edge " + std::to_string(e.id));
    }
    net.add_undirected(e.u, e.v, c);
  }

  FlowResult result;
  result.value = net.max_flow(source, sink);
  std::vector<bool> reach = net.source_side();
  reach.resize(static_cast<std::size_t>(n));
  result.mincut = Cut(std::move(reach));
#ifndef NDEBUG
  double cut_cap = 0.0;
  for (const Edge& e : graph.edges()) {
    if (result.mincut.crosses(e)) cut_cap += cap[static_cast<std::size_t>(e.id)];
  }
  if (std::abs(cut_cap - result.value) > kFlowEpsilon * (1.0 + result.value) * 100) {
    throw InternalError("max_flow: cut certificate mismatch");
  }
#endif
  return result;
}

EdgeSet cut_boundary(const FlexGraph& graph, const Cut& s, const EdgeSet& restrict_to) {
  if (!s.is_proper()) throw PreconditionError("cut_boundary: S must be a proper nonempty subset");
  EdgeSet out;
  for (EdgeId id : restrict_to) {
    if (s.crosses(graph.edge(id))) out.push_back(id);
  }
  return out;
}

ConnectivityResult edge_connectivity_cut(const FlexGraph& graph,
                                         const std::vector<bool>& edge_mask, VertexId s,
                                         VertexId t) {
  if (s == t) throw PreconditionError("edge_connectivity: s equals t");
  FlowNetwork net(graph.num_vertices());
  for (const Edge& e : graph.edges()) {
    if (edge_mask[static_cast<std::size_t>(e.id)]) net.add_undirected(e.u, e.v, 1.0);
  }
  ConnectivityResult r;
  r.value = static_cast<int>(std::lround(net.max_flow(s, t)));
  r.mincut = Cut(net.source_side());
  return r;
}

int edge_connectivity(const FlexGraph& graph, const EdgeSet& edges, VertexId s, VertexId t) {
  return edge_connectivity_cut(graph, to_mask(graph.num_edges(), edges), s, t).value;
}

std::vector<int> component_labels(const FlexGraph& graph, const std::vector<bool>& edge_mask) {
  const auto n = static_cast<std::size_t>(graph.num_vertices());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (const Edge& e : graph.edges()) {
    if (!edge_mask[static_cast<std::size_t>(e.id)]) continue;
    const int a = find(e.u);
    const int b = find(e.v);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::vector<int> label(n, -1);
  int next = 0;
  std::vector<int> root_label(n, -1);
  for (std::size_t v = 0; v < n; ++v) {
    const auto r = static_cast<std::size_t>(find(static_cast<int>(v)));
    if (root_label[r] < 0) root_label[r] = next++;
    label[v] = root_label[r];
  }
  return label;
}

}  // namespace flexsndp
