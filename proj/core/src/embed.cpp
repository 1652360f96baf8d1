#include "flexsndp/embed.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "json.hpp"

namespace flexsndp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_metric(const Metric& metric) {
  const std::size_t n = metric.size();
  if (n == 0) throw PreconditionError("frt_embed: empty metric");
  double scale = 0.0;
  for (const auto& row : metric) {
    if (row.size() != n) throw PreconditionError("frt_embed: metric is not square");
    for (double d : row) {
      if (!std::isfinite(d) || d < 0.0) {
        throw PreconditionError("frt_embed: distances must be finite and non-negative");
      }
      scale = std::max(scale, d);
    }
  }
  const double tol = 1e-9 * std::max(1.0, scale);
  for (std::size_t i = 0; i < n; ++i) {
    if (metric[i][i] > tol) throw PreconditionError("frt_embed: nonzero self-distance");
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(metric[i][j] - metric[j][i]) > tol) {
        throw PreconditionError("frt_embed: metric is not symmetric");
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (metric[i][k] > metric[i][j] + metric[j][k] + tol) {
          throw PreconditionError("frt_embed: triangle inequality fails");
        }
      }
    }
  }
}

std::vector<int> random_permutation(int n, Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(uniform01(rng) * (i + 1));
    std::swap(perm[i], perm[std::min(j, i)]);
  }
  return perm;
}

}  // namespace

double DecompositionTree::distance(int a, int b) const {
  int u = leaf_of_point[a];
  int v = leaf_of_point[b];
  auto depth = [&](int x) {
    int d = 0;
    while (nodes[x].parent >= 0) {
      x = nodes[x].parent;
      ++d;
    }
    return d;
  };
  int du = depth(u);
  int dv = depth(v);
  double total = 0.0;
  while (du > dv) {
    total += nodes[u].length;
    u = nodes[u].parent;
    --du;
  }
  while (dv > du) {
    total += nodes[v].length;
    v = nodes[v].parent;
    --dv;
  }
  while (u != v) {
    total += nodes[u].length + nodes[v].length;
    u = nodes[u].parent;
    v = nodes[v].parent;
  }
  return total;
}

int DecompositionTree::height() const {
  std::vector<int> depth(nodes.size(), 0);
  int h = 0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    depth[i] = depth[nodes[i].parent] + 1;
    h = std::max(h, depth[i]);
  }
  return h;
}

DecompositionTree frt_embed(const Metric& metric, Rng& rng) {
  validate_metric(metric);
  const int n = static_cast<int>(metric.size());
  const std::vector<int> perm = random_permutation(n, rng);
  const double beta = std::exp2(uniform01(rng));  // log-uniform on [1, 2)

  DecompositionTree tree;
  tree.leaf_of_point.assign(static_cast<std::size_t>(n), -1);
  DecompositionTree::Node root;
  root.center = perm[0];
  root.members.resize(static_cast<std::size_t>(n));
  std::iota(root.members.begin(), root.members.end(), 0);
  tree.nodes.push_back(root);
  if (n == 1) {
    tree.leaf_of_point[0] = 0;
    return tree;
  }

  double diameter = 0.0;
  double min_positive = kInf;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      diameter = std::max(diameter, metric[i][j]);
      if (metric[i][j] > 0.0) min_positive = std::min(min_positive, metric[i][j]);
    }
  }

  auto add_child = [&](int parent, std::vector<int> members, int center, double length) {
    DecompositionTree::Node node;
    node.parent = parent;
    node.center = center;
    node.length = length;
    node.members = std::move(members);
    const int id = static_cast<int>(tree.nodes.size());
    if (node.members.size() == 1) tree.leaf_of_point[node.members[0]] = id;
    tree.nodes.push_back(std::move(node));
    tree.nodes[parent].children.push_back(id);
    return id;
  };
  auto split_to_singletons = [&](int cluster, double length) {
    const std::vector<int> members = tree.nodes[cluster].members;
    for (int v : members) add_child(cluster, {v}, v, length);
  };

  if (diameter == 0.0) {
    split_to_singletons(0, 0.0);
    return tree;
  }

  double radius = beta * std::exp2(std::ceil(std::log2(diameter)));  // >= diameter
  std::vector<int> active{0};
  while (!active.empty()) {
    const double next_radius = radius / 2.0;
    std::vector<int> next_active;
    if (next_radius < min_positive / 2.0) {
      // Remaining clusters hold only points at distance zero.
      for (int c : active) split_to_singletons(c, radius);
      break;
    }
    for (int c : active) {
      std::map<int, std::vector<int>> groups;  // keyed by center rank
      for (int v : tree.nodes[c].members) {
        int center_rank = 0;
        while (metric[perm[center_rank]][v] > next_radius) ++center_rank;
        groups[center_rank].push_back(v);
      }
      if (groups.size() == 1) {
        next_active.push_back(c);
        continue;
      }
      for (auto& [center_rank, members] : groups) {
        const bool singleton = members.size() == 1;
        const int id = add_child(c, std::move(members), perm[center_rank], radius);
        if (!singleton) next_active.push_back(id);
      }
    }
    active = std::move(next_active);
    radius = next_radius;
  }
  return tree;
}

// ---------------------------------------------------------------------------

Bundles make_bundles(const FlexGraph& graph, const CapacityMap& capacity) {
  if (capacity.size() != static_cast<std::size_t>(graph.num_edges())) {
    throw PreconditionError("capacity map does not match the edge set");
  }
  Bundles b;
  b.bundle_of_edge.assign(capacity.size(), -1);
  std::map<std::pair<VertexId, VertexId>, int> index;
  for (const Edge& e : graph.edges()) {
    const double c = capacity[e.id];
    if (!std::isfinite(c) || c < 0.0) {
      throw PreconditionError("invalid capacity on edge " + std::to_string(e.id));
    }
    if (c == 0.0) continue;
    const auto key = std::minmax(e.u, e.v);
    auto [it, inserted] = index.emplace(key, static_cast<int>(b.members.size()));
    if (inserted) {
      b.members.emplace_back();
      b.capacity.push_back(0.0);
      b.representative.push_back(e.id);
    }
    b.bundle_of_edge[e.id] = it->second;
    b.members[it->second].push_back(e.id);
    b.capacity[it->second] += c;
  }
  return b;
}

int TreeEmbedding::height() const {
  int h = 0;
  for (const Node& node : nodes) h = std::max(h, node.depth);
  return h;
}

VertexSet TreeEmbedding::vertices_below(int node) const {
  VertexSet out;
  std::vector<int> stack{node};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (nodes[v].children.empty()) out.push_back(nodes[v].vertex);
    for (int c : nodes[v].children) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> TreeEmbedding::preimage(const EdgeSet& edges, const Bundles* bundles) const {
  EdgeSet targets = edges;
  if (bundled && bundles != nullptr) {
    targets.clear();
    for (EdgeId id : edges) {
      const int b = bundles->bundle_of_edge[id];
      if (b >= 0) targets.push_back(bundles->representative[b]);
    }
    normalize(targets);
  }
  std::vector<int> out;
  for (int f = 1; f < num_nodes(); ++f) {
    for (EdgeId id : path[f]) {
      if (contains(targets, id)) {
        out.push_back(f);
        break;
      }
    }
  }
  return out;
}

double induced_cut_capacity(const TreeEmbedding& tree, const FlexGraph& graph,
                            const CapacityMap& capacity, int tree_edge) {
  std::vector<bool> below(static_cast<std::size_t>(graph.num_vertices()), false);
  for (VertexId v : tree.vertices_below(tree_edge)) below[v] = true;
  double total = 0.0;
  for (const Edge& e : graph.edges()) {
    if (below[e.u] != below[e.v]) total += capacity[e.id];
  }
  return total;
}

double beta_parameter(int num_vertices, double c_beta) {
  const double lg = std::ceil(std::log2(std::max(1, num_vertices)));
  return c_beta * std::max(1.0, lg);
}

double capacity_ratio(const CapacityMap& capacity) {
  double lo = kInf;
  double hi = 0.0;
  for (double c : capacity) {
    if (c > 0.0) {
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
  }
  return hi > 0.0 ? hi / lo : 1.0;
}

namespace {

// All-pairs shortest paths over bundles with next-hop reconstruction.
struct ShortestPaths {
  Metric dist;
  std::vector<std::vector<int>> next;          // next vertex on a shortest path
  std::vector<std::vector<int>> bundle_between;  // bundle joining u and v, or -1

  std::vector<EdgeId> path(int u, int v, const Bundles& bundles) const {
    std::vector<EdgeId> hops;
    if (u == v || next[u][v] < 0) return hops;
    while (u != v) {
      const int w = next[u][v];
      hops.push_back(bundles.representative[bundle_between[u][w]]);
      u = w;
    }
    return hops;
  }
};

ShortestPaths all_pairs(const FlexGraph& graph, const Bundles& bundles,
                        const std::vector<double>& length) {
  const int n = graph.num_vertices();
  ShortestPaths sp;
  sp.dist.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), kInf));
  sp.next.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
  sp.bundle_between = sp.next;
  for (int v = 0; v < n; ++v) {
    sp.dist[v][v] = 0.0;
    sp.next[v][v] = v;
  }
  for (int b = 0; b < static_cast<int>(bundles.members.size()); ++b) {
    const Edge& e = graph.edge(bundles.representative[b]);
    sp.bundle_between[e.u][e.v] = sp.bundle_between[e.v][e.u] = b;
    sp.dist[e.u][e.v] = sp.dist[e.v][e.u] = length[b];
    sp.next[e.u][e.v] = e.v;
    sp.next[e.v][e.u] = e.u;
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (sp.dist[i][k] == kInf) continue;
      for (int j = 0; j < n; ++j) {
        const double through = sp.dist[i][k] + sp.dist[k][j];
        if (through < sp.dist[i][j]) {
          sp.dist[i][j] = through;
          sp.next[i][j] = sp.next[i][k];
        }
      }
    }
  }
  return sp;
}

// Converts decomposition trees of the components into one embedding; nodes
// are numbered so that parents precede children.
TreeEmbedding assemble_tree(const FlexGraph& graph, const std::vector<VertexSet>& components,
                            const std::vector<DecompositionTree>& pieces) {
  TreeEmbedding tree;
  tree.leaf_of_vertex.assign(static_cast<std::size_t>(graph.num_vertices()), -1);
  auto add_node = [&](int parent, VertexId vertex) {
    TreeEmbedding::Node node;
    node.parent = parent;
    node.vertex = vertex;
    node.depth = parent >= 0 ? tree.nodes[parent].depth + 1 : 0;
    const int id = tree.num_nodes();
    tree.nodes.push_back(node);
    if (parent >= 0) tree.nodes[parent].children.push_back(id);
    return id;
  };
  auto graft = [&](int parent, const VertexSet& points, const DecompositionTree& piece) {
    // Breadth-first copy keeps parent ids below child ids.
    std::vector<std::pair<int, int>> queue{{0, parent}};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto [src, dst_parent] = queue[head];
      const auto& node = piece.nodes[src];
      const VertexId vertex =
          node.children.empty() ? points[node.members[0]] : points[node.center];
      const int id = add_node(dst_parent, vertex);
      if (node.children.empty()) tree.leaf_of_vertex[vertex] = id;
      for (int c : node.children) queue.emplace_back(c, id);
    }
  };
  if (components.size() == 1) {
    graft(-1, components[0], pieces[0]);
  } else {
    const int root = add_node(-1, components[0][pieces[0].nodes[0].center]);
    for (std::size_t c = 0; c < components.size(); ++c) graft(root, components[c], pieces[c]);
  }
  return tree;
}

}  // namespace

TreeDistribution build_racke_distribution(const FlexGraph& graph, const CapacityMap& capacity,
                                          Rng& rng, const RackeOptions& options) {
  const int n = graph.num_vertices();
  TreeDistribution dist;
  dist.bundles = make_bundles(graph, capacity);
  dist.capacity = capacity;
  const Bundles& bundles = dist.bundles;
  const int nb = static_cast<int>(bundles.members.size());

  std::vector<bool> positive(capacity.size());
  for (std::size_t i = 0; i < capacity.size(); ++i) positive[i] = capacity[i] > 0.0;
  const std::vector<int> label = component_labels(graph, positive);
  std::vector<VertexSet> components;
  for (VertexId v = 0; v < n; ++v) {
    if (label[v] >= static_cast<int>(components.size())) components.resize(label[v] + 1);
    components[label[v]].push_back(v);
  }

  std::vector<double> cumulative(static_cast<std::size_t>(nb), 0.0);
  std::vector<double> length(static_cast<std::size_t>(nb));
  double total = 0.0;
  const int max_rounds = std::max(1, options.c_iter * n);
  while (true) {
    const double r_max =
        nb > 0 ? *std::max_element(cumulative.begin(), cumulative.end()) : 0.0;
    for (int b = 0; b < nb; ++b) {
      length[b] = std::exp(cumulative[b] - r_max) / bundles.capacity[b];
    }
    const ShortestPaths sp = all_pairs(graph, bundles, length);

    std::vector<DecompositionTree> pieces;
    for (const VertexSet& comp : components) {
      Metric sub(comp.size(), std::vector<double>(comp.size()));
      for (std::size_t i = 0; i < comp.size(); ++i) {
        for (std::size_t j = 0; j < comp.size(); ++j) sub[i][j] = sp.dist[comp[i]][comp[j]];
      }
      // Floating-point path sums can break symmetry in the last bit.
      for (std::size_t i = 0; i < comp.size(); ++i) {
        for (std::size_t j = i + 1; j < comp.size(); ++j) sub[j][i] = sub[i][j];
      }
      pieces.push_back(frt_embed(sub, rng));
    }
    TreeEmbedding tree = assemble_tree(graph, components, pieces);
    tree.bundled = true;
    tree.y.assign(tree.nodes.size(), 0.0);
    tree.path.assign(tree.nodes.size(), {});
    std::vector<double> bundle_load(static_cast<std::size_t>(nb), 0.0);
    for (int f = 1; f < tree.num_nodes(); ++f) {
      tree.y[f] = induced_cut_capacity(tree, graph, capacity, f);
      tree.path[f] = sp.path(tree.nodes[f].vertex, tree.nodes[tree.nodes[f].parent].vertex, bundles);
      for (EdgeId rep : tree.path[f]) bundle_load[bundles.bundle_of_edge[rep]] += tree.y[f];
    }
    double worst = 0.0;
    for (int b = 0; b < nb; ++b) {
      bundle_load[b] /= bundles.capacity[b];
      worst = std::max(worst, bundle_load[b]);
    }
    double step = 1.0 - total;
    if (worst > 0.0) step = std::min(step, 1.0 / worst);
    for (int b = 0; b < nb; ++b) cumulative[b] += step * bundle_load[b];
    total += step;
    dist.trees.push_back(std::move(tree));
    dist.weights.push_back(step);
    ++dist.iterations;
    if (total >= 1.0 - 1e-12 || dist.iterations >= max_rounds) break;
  }
  for (double& w : dist.weights) w /= total;

  dist.congestion = loads(dist, graph).max_rload;
  const double target = options.target > 0.0 ? options.target : beta_parameter(n, options.c_beta);
  if (dist.congestion > target + 1e-9) {
    throw CongestionError("build_racke_distribution: congestion " +
                              std::to_string(dist.congestion) + " exceeds target " +
                              std::to_string(target),
                          dist.congestion);
  }
  return dist;
}

TreeEmbedding sample_tree(const TreeDistribution& dist, Rng& rng) {
  if (dist.trees.empty()) throw PreconditionError("sample_tree: empty distribution");
  const double u = uniform01(rng);
  std::size_t pick = dist.trees.size() - 1;
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.weights.size(); ++i) {
    acc += dist.weights[i];
    if (u < acc) {
      pick = i;
      break;
    }
  }
  TreeEmbedding tree = dist.trees[pick];
  if (!tree.bundled) return tree;
  for (auto& hops : tree.path) {
    for (EdgeId& hop : hops) {
      const int b = dist.bundles.bundle_of_edge[hop];
      const auto& members = dist.bundles.members[b];
      if (members.size() == 1) continue;
      const double target = uniform01(rng) * dist.bundles.capacity[b];
      double run = 0.0;
      EdgeId chosen = members.back();
      for (EdgeId m : members) {
        run += dist.capacity[m];
        if (target < run) {
          chosen = m;
          break;
        }
      }
      hop = chosen;
    }
  }
  tree.bundled = false;
  return tree;
}

double tree_maxflow(const TreeEmbedding& tree, const std::vector<double>& y, const VertexSet& a,
                    const VertexSet& b, const std::vector<int>& forbidden) {
  const int m = tree.num_nodes();
  // forced[v]: 0 = must be on the A side, 1 = B side, -1 = free.
  std::vector<int> forced(static_cast<std::size_t>(m), -1);
  for (VertexId v : a) forced[tree.leaf_of_vertex[v]] = 0;
  for (VertexId v : b) {
    const int leaf = tree.leaf_of_vertex[v];
    if (forced[leaf] == 0) throw PreconditionError("tree_maxflow: A and B overlap");
    forced[leaf] = 1;
  }
  std::vector<bool> blocked(static_cast<std::size_t>(m), false);
  for (int f : forbidden) blocked[f] = true;

  // cost[v][s]: cheapest cut inside the subtree of v with v on side s.
  std::vector<std::array<double, 2>> cost(static_cast<std::size_t>(m), {0.0, 0.0});
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int z) { return tree.nodes[x].depth > tree.nodes[z].depth; });
  for (int v : order) {
    for (int s = 0; s < 2; ++s) {
      if (forced[v] >= 0 && forced[v] != s) {
        cost[v][s] = kInf;
        continue;
      }
      double c = 0.0;
      for (int child : tree.nodes[v].children) {
        const double cap = blocked[child] ? 0.0 : y[child];
        c += std::min(cost[child][s], cost[child][1 - s] + cap);
      }
      cost[v][s] = c;
    }
  }
  return std::min(cost[0][0], cost[0][1]);
}

LoadReport loads(const TreeEmbedding& tree, const FlexGraph& graph, const CapacityMap& capacity) {
  LoadReport r;
  r.load.assign(static_cast<std::size_t>(graph.num_edges()), 0.0);
  r.rload.assign(r.load.size(), 0.0);
  Bundles bundles;
  if (tree.bundled) bundles = make_bundles(graph, capacity);
  for (int f = 1; f < tree.num_nodes(); ++f) {
    for (EdgeId hop : tree.path[f]) {
      if (!tree.bundled) {
        r.load[hop] += tree.y[f];
        continue;
      }
      const int b = bundles.bundle_of_edge[hop];
      for (EdgeId m : bundles.members[b]) {
        r.load[m] += tree.y[f] * capacity[m] / bundles.capacity[b];
      }
    }
  }
  for (std::size_t e = 0; e < r.load.size(); ++e) {
    if (capacity[e] > 0.0) {
      r.rload[e] = r.load[e] / capacity[e];
    } else {
      r.rload[e] = r.load[e] > 0.0 ? kInf : 0.0;
    }
    r.max_rload = std::max(r.max_rload, r.rload[e]);
  }
  return r;
}

LoadReport loads(const TreeDistribution& dist, const FlexGraph& graph) {
  LoadReport avg;
  avg.load.assign(static_cast<std::size_t>(graph.num_edges()), 0.0);
  avg.rload.assign(avg.load.size(), 0.0);
  for (std::size_t i = 0; i < dist.trees.size(); ++i) {
    const LoadReport one = loads(dist.trees[i], graph, dist.capacity);
    for (std::size_t e = 0; e < avg.load.size(); ++e) {
      avg.load[e] += dist.weights[i] * one.load[e];
      avg.rload[e] += dist.weights[i] * one.rload[e];
    }
  }
  for (double r : avg.rload) avg.max_rload = std::max(avg.max_rload, r);
  return avg;
}

std::string distribution_to_json(const TreeDistribution& dist, const FlexGraph& graph) {
  using nlohmann::json;
  json doc;
  doc["format"] = "flexsndp-tree-distribution/1";
  doc["num_vertices"] = graph.num_vertices();
  doc["congestion"] = dist.congestion;
  doc["iterations"] = dist.iterations;
  doc["capacity"] = dist.capacity;
  json trees = json::array();
  for (std::size_t i = 0; i < dist.trees.size(); ++i) {
    const TreeEmbedding& t = dist.trees[i];
    json nodes = json::array();
    for (int v = 0; v < t.num_nodes(); ++v) {
      json node;
      node["id"] = v;
      node["parent"] = t.nodes[v].parent;
      node["vertex"] = t.nodes[v].vertex;
      node["leaf"] = t.is_leaf(v);
      if (v > 0) {
        node["y"] = t.y[v];
        node["path"] = t.path[v];
      }
      nodes.push_back(std::move(node));
    }
    const LoadReport lr = loads(t, graph, dist.capacity);
    trees.push_back({{"weight", dist.weights[i]},
                     {"height", t.height()},
                     {"bundled", t.bundled},
                     {"nodes", std::move(nodes)},
                     {"load", lr.load},
                     {"max_rload", lr.max_rload}});
  }
  doc["trees"] = std::move(trees);
  const LoadReport avg = loads(dist, graph);
  doc["expected_rload"] = avg.rload;
  return doc.dump(2);
}

}  // namespace flexsndp
