#include "flexsndp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "flexsndp/oracle.hpp"
#include "flexsndp/rounding.hpp"

namespace flexsndp {

void PipelineParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw PreconditionError(std::string("invalid pipeline parameter: ") + what);
  };
  require(c_beta > 0.0, "c_beta must be positive");
  require(c_h > 0.0, "c_h must be positive");
  require(c_iter > 0, "c_iter must be positive");
  require(c_r > 0.0, "c_r must be positive");
  require(phi > 0.0 && phi < 1.0, "phi must lie in (0, 1)");
  require(eps_lp > 0.0, "eps_lp must be positive");
  require(eps_sep > 0.0, "eps_sep must be positive");
  require(!t_override || *t_override > 0, "t must be positive");
  require(!t_prime_override || *t_prime_override > 0, "t' must be positive");
  require(threshold_connectivity >= 0, "threshold connectivity must be non-negative");
  require(retry_cap > 0, "retry cap must be positive");
  require(diagnostic_trees > 0, "diagnostic tree count must be positive");
}

// ---------------------------------------------------------------------------
// Base solution.

namespace {

std::string describe_vertices(const Cut& cut) {
  std::string s = "{";
  bool first = true;
  for (VertexId v : cut.members()) {
    if (!first) s += ",";
    s += std::to_string(v);
    first = false;
  }
  return s + "}";
}

bool all_pairs_connected(const FlexGraph& graph, const std::vector<bool>& mask, int r) {
  for (const TerminalPair& pair : graph.pairs()) {
    if (edge_connectivity_cut(graph, mask, pair.s, pair.t).value < r) return false;
  }
  return true;
}

// Raises the connectivity of every pair from r - 1 to r by growing duals on
// the minimal deficient sets, then prunes by reverse deletion.
void primal_dual_round(const FlexGraph& graph, std::vector<bool>& chosen, int r) {
  const int m = graph.num_edges();
  std::vector<double> load(static_cast<std::size_t>(m), 0.0);
  std::vector<EdgeId> added;
  while (true) {
    std::vector<Cut> candidates;
    for (const TerminalPair& pair : graph.pairs()) {
      ConnectivityResult st = edge_connectivity_cut(graph, chosen, pair.s, pair.t);
      if (st.value >= r) continue;
      candidates.push_back(st.mincut);
      candidates.push_back(edge_connectivity_cut(graph, chosen, pair.t, pair.s).mincut);
    }
    if (candidates.empty()) break;
    // Inclusion-minimal, distinct sets.
    std::vector<Cut> active;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const auto& a = candidates[i].indicator();
      bool minimal = true;
      for (std::size_t j = 0; j < candidates.size() && minimal; ++j) {
        if (i == j) continue;
        const auto& b = candidates[j].indicator();
        bool subset = true;
        for (std::size_t v = 0; v < a.size() && subset; ++v) subset = !b[v] || a[v];
        if (subset && (b != a || j < i)) minimal = false;
      }
      if (minimal) active.push_back(candidates[i]);
    }
    EdgeId best = -1;
    double best_time = 0.0;
    std::vector<int> rate(static_cast<std::size_t>(m), 0);
    for (const Edge& e : graph.edges()) {
      if (chosen[e.id]) continue;
      for (const Cut& c : active) rate[e.id] += c.crosses(e) ? 1 : 0;
      if (rate[e.id] == 0) continue;
      const double time = std::max(0.0, e.cost - load[e.id]) / rate[e.id];
      if (best < 0 || time < best_time - 1e-12) {
        best = e.id;
        best_time = time;
      }
    }
    if (best < 0) {
      throw InfeasibleError("base_solution: no edge of G crosses deficient cut " +
                            describe_vertices(active.front()));
    }
    for (const Edge& e : graph.edges()) {
      if (!chosen[e.id]) load[e.id] += best_time * rate[e.id];
    }
    chosen[best] = true;
    added.push_back(best);
  }
  for (auto it = added.rbegin(); it != added.rend(); ++it) {
    chosen[*it] = false;
    if (!all_pairs_connected(graph, chosen, r)) chosen[*it] = true;
  }
}

}  // namespace

EdgeSet base_solution(const FlexGraph& graph, int p, BaseSolver solver) {
  if (p < 1) throw PreconditionError("base_solution: p must be positive");
  const std::vector<bool> everything(static_cast<std::size_t>(graph.num_edges()), true);
  const auto pairs = graph.pairs();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ConnectivityResult c = edge_connectivity_cut(graph, everything, pairs[i].s, pairs[i].t);
    if (c.value < p) {
      throw InfeasibleError("base_solution: pair " + std::to_string(i) + " (" +
                            std::to_string(pairs[i].s) + "," + std::to_string(pairs[i].t) +
                            ") is only " + std::to_string(c.value) +
                            "-edge-connected in G; deficient cut " + describe_vertices(c.mincut));
    }
  }
  if (solver == BaseSolver::kExact) return brute_force_optimum(graph, p, 0).edges;

  std::vector<bool> chosen(static_cast<std::size_t>(graph.num_edges()), false);
  for (int r = 1; r <= p; ++r) primal_dual_round(graph, chosen, r);
  EdgeSet out;
  for (EdgeId id = 0; id < graph.num_edges(); ++id) {
    if (chosen[id]) out.push_back(id);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Capacity graph and schedules.

CapacityGraph build_capacity_graph(const FlexGraph& graph, const EdgeSet& h,
                                   const FractionalSolution& x, int p, int l, double beta_param,
                                   std::span<const CutConstraint> pool,
                                   int threshold_connectivity) {
  const int n = graph.num_vertices();
  const int m = graph.num_edges();
  if (x.x.size() != static_cast<std::size_t>(m)) {
    throw PreconditionError("build_capacity_graph: solution does not match the edge set");
  }
  if (!(beta_param > 0.0)) throw PreconditionError("build_capacity_graph: beta must be positive");
  const int conn = threshold_connectivity > 0 ? threshold_connectivity : p + l + 1;

  CapacityGraph cg;
  cg.theta = 1.0 / (4.0 * conn * beta_param);
  cg.adjusted_x.assign(static_cast<std::size_t>(m), 0.0);
  cg.copies.assign(static_cast<std::size_t>(m), 0);
  const std::vector<bool> in_h = to_mask(m, h);

  const double tiny = 1.0 / (static_cast<double>(n) * n * n);
  const double scale = 1.0 + 1.0 / n;
  std::vector<bool> dropped(static_cast<std::size_t>(m), false);
  for (EdgeId id = 0; id < m; ++id) {
    if (in_h[id]) continue;
    const double v = std::clamp(x.x[id], 0.0, 1.0);
    if (v > 0.0 && v < tiny) {
      dropped[id] = true;
      ++cg.zeroed;
      continue;
    }
    cg.adjusted_x[id] = v;
  }
  if (cg.zeroed > 0) {
    for (EdgeId id = 0; id < m; ++id) cg.adjusted_x[id] *= scale;
  }
  auto coverage = [&](const CutConstraint& con) {
    double cover = 0.0;
    for (EdgeId id : con.edges) cover += in_h[id] ? 1.0 : cg.adjusted_x[id];
    return cover;
  };
  // Many parallel candidates can carry more than 1/n of a cut in tiny values;
  // such constraints get their dropped values back.
  for (const CutConstraint& con : pool) {
    if (coverage(con) >= 1.0 - 1e-6) continue;
    for (EdgeId id : con.edges) {
      if (!dropped[id]) continue;
      dropped[id] = false;
      cg.adjusted_x[id] = std::clamp(x.x[id], 0.0, 1.0) * scale;
      --cg.zeroed;
      ++cg.restored;
    }
  }
  for (const CutConstraint& con : pool) {
    const double cover = coverage(con);
    if (cover < 1.0 - 1e-6) {
      throw InternalError("build_capacity_graph: pooled constraint covered only " +
                          std::to_string(cover) + " after small-value rounding");
    }
  }

  std::vector<Edge> edges;
  const double half = cg.theta / 2.0;
  for (const Edge& e : graph.edges()) {
    int k = 0;
    double share = 0.0;
    if (in_h[e.id]) {
      k = 1;
      share = cg.theta;
    } else if (cg.adjusted_x[e.id] >= cg.theta) {
      k = static_cast<int>(std::ceil(cg.adjusted_x[e.id] / half - 1e-9));
      share = cg.adjusted_x[e.id] / k;
    } else if (cg.adjusted_x[e.id] > 0.0) {
      k = 1;
      share = cg.adjusted_x[e.id];
    }
    cg.copies[e.id] = k;
    for (int c = 0; c < k; ++c) {
      const EdgeId rid = static_cast<EdgeId>(edges.size());
      if (in_h[e.id]) cg.h.push_back(rid);
      edges.push_back(Edge{rid, e.u, e.v, e.cost, e.safe});
      cg.capacity.push_back(share);
      cg.origin.push_back(e.id);
    }
  }
  std::vector<TerminalPair> pairs(graph.pairs().begin(), graph.pairs().end());
  cg.graph = FlexGraph(n, std::move(edges), std::move(pairs), graph.p(), graph.q());
  return cg;
}

int rounding_schedule(int num_pairs, double beta_param, int connectivity, double phi) {
  const double value =
      (std::log(4.0 * std::max(1, num_pairs)) + 2.0 * beta_param * connectivity * std::log(2.0)) /
      phi;
  return std::max(1, static_cast<int>(std::ceil(value - 1e-9)));
}

int tree_schedule(int num_vertices, int connectivity) {
  const double value = 8.0 / 3.0 *
                       (std::log(2.0) + 2.0 * connectivity * std::log(std::max(1, num_vertices)));
  return std::max(1, static_cast<int>(std::ceil(value - 1e-9)));
}

// ---------------------------------------------------------------------------
// Diagnostics.

StageDiagnostics stage_diagnostics(const FlexGraph& graph, const EdgeSet& h,
                                   const TreeEmbedding& tree, const ViolatingEdgeSet& f, int p,
                                   int l, double beta_param, double theta, Rng& rng,
                                   int flow_samples) {
  StageDiagnostics d;
  d.forbidden = tree.preimage(f.edges);
  for (int e : d.forbidden) d.blocked_capacity += tree.y[e];
  d.is_good = d.blocked_capacity <= 0.5 + 1e-12;
  d.shattered_bound = 2.0 * (p + l + 1) * beta_param;

  const int n = graph.num_vertices();
  std::vector<bool> mask = to_mask(graph.num_edges(), set_difference(h, f.edges));
  const std::vector<int> label = component_labels(graph, mask);
  const int num_components = 1 + *std::max_element(label.begin(), label.end());
  d.components.assign(static_cast<std::size_t>(num_components), {});
  for (VertexId v = 0; v < n; ++v) d.components[label[v]].push_back(v);

  // Pieces of T \ M^{-1}(F).
  const int nodes = tree.num_nodes();
  std::vector<int> piece(static_cast<std::size_t>(nodes));
  std::iota(piece.begin(), piece.end(), 0);
  auto find = [&](int v) {
    while (piece[v] != v) v = piece[v] = piece[piece[v]];
    return v;
  };
  std::vector<bool> blocked(static_cast<std::size_t>(nodes), false);
  for (int e : d.forbidden) blocked[e] = true;
  for (int e = 1; e < nodes; ++e) {
    if (!blocked[e]) piece[find(e)] = find(tree.nodes[e].parent);
  }
  std::vector<bool> is_shattered(static_cast<std::size_t>(num_components), false);
  for (int c = 0; c < num_components; ++c) {
    const int root = find(tree.leaf_of_vertex[d.components[c].front()]);
    for (VertexId v : d.components[c]) {
      if (find(tree.leaf_of_vertex[v]) != root) {
        is_shattered[c] = true;
        break;
      }
    }
    if (is_shattered[c]) d.shattered.push_back(d.components[c]);
  }
  d.bound_holds = !d.is_good || d.shattered.size() <= d.shattered_bound + 1e-9;

  if (!d.is_good || flow_samples <= 0) return d;
  std::vector<int> split_pairs;
  const auto pairs = graph.pairs();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (label[pairs[i].s] != label[pairs[i].t]) split_pairs.push_back(static_cast<int>(i));
  }
  if (split_pairs.empty()) return d;
  for (int sample = 0; sample < flow_samples; ++sample) {
    const int i = split_pairs[static_cast<std::size_t>(uniform01(rng) * split_pairs.size())];
    const int cs = label[pairs[i].s];
    const int ct = label[pairs[i].t];
    VertexSet a = d.components[cs];
    VertexSet b = d.components[ct];
    for (int c = 0; c < num_components; ++c) {
      if (!is_shattered[c] || c == cs || c == ct) continue;
      VertexSet& side = uniform01(rng) < 0.5 ? a : b;
      side.insert(side.end(), d.components[c].begin(), d.components[c].end());
    }
    ++d.flow_checks;
    if (tree_maxflow(tree, tree.y, a, b, d.forbidden) < theta - 1e-9) ++d.flow_violations;
  }
  return d;
}

namespace {

// Maps violating sets given in input ids onto the capacity graph, where every
// H edge has exactly one copy.
std::vector<ViolatingEdgeSet> refine_sets(const CapacityGraph& cg,
                                          const std::vector<ViolatingEdgeSet>& sets) {
  std::vector<EdgeId> copy_of(cg.copies.size(), -1);
  for (EdgeId rid : cg.h) copy_of[cg.origin[rid]] = rid;
  std::vector<ViolatingEdgeSet> out;
  for (const ViolatingEdgeSet& f : sets) {
    ViolatingEdgeSet r = f;
    r.edges.clear();
    for (EdgeId id : f.edges) r.edges.push_back(copy_of[id]);
    normalize(r.edges);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ViolatingSetStats> evaluate_sets(const CapacityGraph& cg, const TreeDistribution& dist,
                                             const std::vector<ViolatingEdgeSet>& sets, int p,
                                             int l, double beta_param, int num_trees,
                                             int flow_samples, std::uint64_t seed,
                                             std::uint64_t stream) {
  const std::vector<ViolatingEdgeSet> refined = refine_sets(cg, sets);
  std::vector<ViolatingSetStats> stats(sets.size());
  for (std::size_t s = 0; s < sets.size(); ++s) stats[s].f = sets[s].edges;
  Rng tree_rng = make_rng(seed, "diag-tree", stream);
  Rng flow_rng = make_rng(seed, "diag-flow", stream);
  for (int t = 0; t < num_trees; ++t) {
    const TreeEmbedding tree = sample_tree(dist, tree_rng);
    for (std::size_t s = 0; s < refined.size(); ++s) {
      StageDiagnostics d = stage_diagnostics(cg.graph, cg.h, tree, refined[s], p, l, beta_param,
                                             cg.theta, flow_rng, flow_samples);
      ViolatingSetStats& st = stats[s];
      ++st.trees;
      if (d.is_good) ++st.good;
      if (d.is_good) st.max_shattered = std::max(st.max_shattered, static_cast<int>(d.shattered.size()));
      if (!d.bound_holds) ++st.bound_violations;
      st.flow_checks += d.flow_checks;
      st.flow_violations += d.flow_violations;
    }
  }
  return stats;
}

DiagnosticsSummary summarize(const std::vector<ViolatingSetStats>& stats, int trees,
                             double bound) {
  DiagnosticsSummary s;
  s.violating_sets = static_cast<int>(stats.size());
  s.trees = trees;
  s.shattered_bound = bound;
  for (const ViolatingSetStats& st : stats) {
    if (st.trees > 0) {
      s.min_good_fraction =
          std::min(s.min_good_fraction, static_cast<double>(st.good) / st.trees);
    }
    s.max_shattered = std::max(s.max_shattered, st.max_shattered);
    s.bound_violations += st.bound_violations;
    s.flow_checks += st.flow_checks;
    s.flow_violations += st.flow_violations;
  }
  return s;
}

}  // namespace

DiagnosticRun diagnose_stage(const FlexGraph& graph, const EdgeSet& h, const FractionalSolution& x,
                             int p, int l, const PipelineParams& params, int num_trees,
                             int flow_samples, std::uint64_t seed) {
  DiagnosticRun run;
  const double beta_param = beta_parameter(graph.num_vertices(), params.c_beta);
  run.capacity_graph =
      build_capacity_graph(graph, h, x, p, l, beta_param, {}, params.threshold_connectivity);
  RackeOptions options{params.c_beta, params.c_h, params.c_iter, beta_param};
  Rng embed_rng = make_rng(seed, "diag-embed", static_cast<std::uint64_t>(l));
  run.distribution = build_racke_distribution(run.capacity_graph.graph,
                                              run.capacity_graph.capacity, embed_rng, options);
  const std::vector<ViolatingEdgeSet> sets = enumerate_violating_sets(graph, h, p, l);
  run.sets = evaluate_sets(run.capacity_graph, run.distribution, sets, p, l, beta_param,
                           num_trees, flow_samples, seed, static_cast<std::uint64_t>(l));
  run.shattered_bound = 2.0 * (p + l + 1) * beta_param;
  return run;
}

// ---------------------------------------------------------------------------
// Stages.

StageOutcome augment_stage(const FlexGraph& graph, const EdgeSet& h, int p, int l,
                           const PipelineParams& params) {
  params.validate();
  StageOutcome out;
  StageReport& report = out.report;
  report.stage = l;
  const int n = graph.num_vertices();
  const int k = static_cast<int>(graph.pairs().size());

  AugmentLpOptions lp_options;
  lp_options.eps_lp = params.eps_lp;
  lp_options.eps_sep = params.eps_sep;
  const AugmentLpResult lp = solve_augment_lp(graph, h, p, l, lp_options);
  report.lp_objective = lp.solution.objective;
  report.lp_rounds = lp.rounds;
  report.pool_size = static_cast<int>(lp.pool.size());

  const int conn = params.threshold_connectivity > 0 ? params.threshold_connectivity : p + l + 1;
  report.beta_param = beta_parameter(n, params.c_beta);
  report.theta = 1.0 / (4.0 * conn * report.beta_param);

  EdgeSet large;
  for (const Edge& e : graph.edges()) {
    if (!contains(h, e.id) && lp.solution.x[e.id] >= report.theta) large.push_back(e.id);
  }
  report.num_large = static_cast<int>(large.size());
  const EdgeSet h1 = set_union(h, large);

  auto finish = [&](EdgeSet result) {
    report.added = set_difference(result, h);
    report.added_cost = graph.cost(report.added);
    out.h = std::move(result);
    return out;
  };
  if (is_flex_connected(graph, h1, p, l + 1)) {
    report.short_circuit = true;
    return finish(h1);
  }

  report.t = params.t_override.value_or(rounding_schedule(k, report.beta_param, conn, params.phi));
  report.t_prime = params.t_prime_override.value_or(tree_schedule(n, conn));
  const RackeOptions options{params.c_beta, params.c_h, params.c_iter, report.beta_param};
  const std::string stage_tag = std::to_string(l);

  for (int attempt = 0; attempt < params.retry_cap; ++attempt) {
    ++report.attempts;
    const std::string tag = stage_tag + ":" + std::to_string(attempt);
    const CapacityGraph cg = build_capacity_graph(graph, h1, lp.solution, p, l, report.beta_param,
                                                  lp.pool, params.threshold_connectivity);
    Rng embed_rng = make_rng(params.seed, "embed", static_cast<std::uint64_t>(l),
                             static_cast<std::uint64_t>(attempt));
    TreeDistribution dist;
    try {
      dist = build_racke_distribution(cg.graph, cg.capacity, embed_rng, options);
    } catch (const CongestionError& err) {
      report.beta_hat.push_back(err.achieved());
      continue;
    }
    report.beta_hat.push_back(dist.congestion);

    if (params.diagnostics && !report.diagnostics) {
      try {
        const auto sets = enumerate_violating_sets(graph, h1, p, l);
        const auto stats = evaluate_sets(cg, dist, sets, p, l, report.beta_param,
                                         params.diagnostic_trees, 4, params.seed,
                                         static_cast<std::uint64_t>(l));
        report.diagnostics = summarize(stats, params.diagnostic_trees,
                                       2.0 * (p + l + 1) * report.beta_param);
      } catch (const GuardError&) {
        DiagnosticsSummary skipped;
        skipped.enumeration_skipped = true;
        report.diagnostics = skipped;
      }
    }

    std::vector<bool> bought = to_mask(graph.num_edges(), h1);
    Rng tree_rng = make_rng(params.seed, "tree:" + tag);
    for (int i = 0; i < report.t_prime; ++i) {
      const TreeEmbedding tree = sample_tree(dist, tree_rng);
      ++report.trees_sampled;
      report.tree_heights.push_back(tree.height());
      const RoundingParams rp = RoundingParams::for_tree(tree, report.theta, params.c_r);
      for (int j = 0; j < report.t; ++j) {
        Rng round_rng = make_rng(params.seed, "round:" + tag, static_cast<std::uint64_t>(i),
                                 static_cast<std::uint64_t>(j));
        const TreeEdgeSet picked = tree_round(tree, tree.y, rp, round_rng);
        ++report.roundings;
        for (EdgeId rid : map_to_graph(tree, picked)) bought[cg.origin[rid]] = true;
      }
    }
    EdgeSet candidate;
    for (EdgeId id = 0; id < graph.num_edges(); ++id) {
      if (bought[id]) candidate.push_back(id);
    }
    if (is_flex_connected(graph, candidate, p, l + 1)) return finish(std::move(candidate));
  }
  throw StageFailure("augment_stage: stage " + std::to_string(l) + " still infeasible after " +
                         std::to_string(params.retry_cap) + " attempts",
                     report);
}

SolveResult solve_flex_sndp(const FlexGraph& graph, const PipelineParams& params) {
  params.validate();
  const int p = graph.p();
  const int q = graph.q();
  FlexCheck whole = is_flex_connected(graph, graph.all_edges(), p, q);
  if (!whole) {
    throw InfeasibleError("solve_flex_sndp: instance is infeasible even with every edge: " +
                          whole.witness->describe());
  }
  SolveResult result;
  result.base = base_solution(graph, p, params.base);
  result.base_cost = graph.cost(result.base);
  if (!is_flex_connected(graph, result.base, p, 0)) {
    throw InternalError("solve_flex_sndp: base solution is not (p,0)-flex-connected");
  }
  result.h = result.base;
  double ledger = result.base_cost;
  for (int l = 0; l < q; ++l) {
    StageOutcome stage = augment_stage(graph, result.h, p, l, params);
    ledger += stage.report.added_cost;
    result.h = std::move(stage.h);
    result.stages.push_back(std::move(stage.report));
  }
  result.total_cost = graph.cost(result.h);
  if (std::abs(result.total_cost - ledger) > 1e-9 * (1.0 + ledger)) {
    throw InternalError("solve_flex_sndp: cost ledger does not add up");
  }
  FlexCheck final_check = is_flex_connected(graph, result.h, p, q);
  if (!final_check) {
    throw InternalError("solve_flex_sndp: final solution fails verification: " +
                        final_check.witness->describe());
  }
  return result;
}

}  // namespace flexsndp
