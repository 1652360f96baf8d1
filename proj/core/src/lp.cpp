#include "flexsndp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "flexsndp/errors.hpp"
#include "flexsndp/simplex.hpp"
#include "flexsndp/verify.hpp"

namespace flexsndp {

double FractionalSolution::coverage(const EdgeSet& edges) const {
  double total = 0.0;
  for (EdgeId id : edges) total += x[id];
  return total;
}

namespace {

std::string describe_cut(const Cut& cut) {
  std::ostringstream os;
  os << "{";
  const VertexSet members = cut.members();
  for (std::size_t i = 0; i < members.size(); ++i) os << (i ? "," : "") << members[i];
  os << "}";
  return os.str();
}

}  // namespace

FractionalSolution lp_solve(std::span<const CutConstraint> pool, const std::vector<double>& costs,
                            double eps_lp) {
  FractionalSolution sol;
  sol.x.assign(costs.size(), 0.0);
  if (pool.empty()) return sol;

  // Column per edge in the support of the pool.
  std::vector<EdgeId> vars;
  for (const CutConstraint& c : pool) {
    if (c.edges.empty()) {
      throw InfeasibleError("lp_solve: constraint of cut " + describe_cut(c.cut) +
                            " has no candidate edge");
    }
    vars.insert(vars.end(), c.edges.begin(), c.edges.end());
  }
  normalize(vars);
  std::map<EdgeId, int> column;
  for (int i = 0; i < static_cast<int>(vars.size()); ++i) column[vars[i]] = i;

  // Dual of  min c x  s.t.  A x >= 1, x <= 1, x >= 0:
  //   max 1.y - 1.z  s.t.  A^T y - z <= c,  y, z >= 0.
  // Row e of the dual carries the shadow price x_e.
  const int num_rows = static_cast<int>(vars.size());
  const int num_cons = static_cast<int>(pool.size());
  std::vector<std::vector<double>> a(static_cast<std::size_t>(num_rows),
                                     std::vector<double>(static_cast<std::size_t>(num_cons + num_rows), 0.0));
  std::vector<double> b(static_cast<std::size_t>(num_rows));
  std::vector<double> c(static_cast<std::size_t>(num_cons + num_rows), 0.0);
  for (int j = 0; j < num_cons; ++j) {
    for (EdgeId id : pool[j].edges) a[column[id]][j] = 1.0;
    c[j] = 1.0;
  }
  for (int e = 0; e < num_rows; ++e) {
    const double ce = costs[vars[e]];
    if (ce < 0.0) throw PreconditionError("lp_solve: negative cost");
    b[e] = ce;
    a[e][num_cons + e] = -1.0;
    c[num_cons + e] = -1.0;
  }

  DenseSimplex::Result r = DenseSimplex::maximize(a, b, c);
  if (r.status == DenseSimplex::Status::kUnbounded) {
    throw InfeasibleError("lp_solve: covering LP is infeasible");
  }
  if (r.status != DenseSimplex::Status::kOptimal) {
    throw ConvergenceError("lp_solve: simplex pivot limit reached");
  }
  for (int e = 0; e < num_rows; ++e) {
    sol.x[vars[e]] = std::clamp(r.dual[e], 0.0, 1.0);
  }
  sol.objective = 0.0;
  for (EdgeId id : vars) sol.objective += costs[id] * sol.x[id];

  for (const CutConstraint& con : pool) {
    if (sol.coverage(con.edges) < 1.0 - 10 * eps_lp) {
      throw InternalError("lp_solve: simplex returned an infeasible point");
    }
  }
  if (std::abs(sol.objective - r.objective) > eps_lp * (1.0 + std::abs(r.objective))) {
    throw InternalError("lp_solve: primal and dual objectives disagree");
  }
  return sol;
}

namespace {

// Visits (cut, pair) for every violated cut found by the B-enumeration sweep;
// visit returns false to stop.
template <typename Visit>
void sweep_violated(const FractionalSolution& x, const FlexGraph& graph, const EdgeSet& h, int p,
                    int l, double eps_sep, Visit&& visit) {
  const std::vector<bool> in_h = to_mask(graph.num_edges(), h);
  double k_big = 1.0;
  for (const Edge& e : graph.edges()) {
    if (!in_h[e.id]) k_big += x.x[e.id];
  }
  const double threshold = (p - 1) * k_big + 1.0 - eps_sep;
  const EdgeSet unsafe = graph.unsafe_in(h);

  CapacityMap cap(static_cast<std::size_t>(graph.num_edges()));
  for (const Edge& e : graph.edges()) cap[e.id] = in_h[e.id] ? k_big : x.x[e.id];

  for_each_combination(unsafe, l + 1, [&](const std::vector<int>& b) {
    for (EdgeId id : b) cap[id] = 0.0;
    bool keep_going = true;
    const auto pairs = graph.pairs();
    for (int i = 0; i < static_cast<int>(pairs.size()) && keep_going; ++i) {
      FlowResult f = max_flow(graph, cap, {pairs[i].s}, {pairs[i].t});
      if (f.value < threshold) keep_going = visit(f.mincut, i);
    }
    for (EdgeId id : b) cap[id] = k_big;
    return keep_going;
  });
}

CutConstraint make_constraint(const FractionalSolution& x, const FlexGraph& graph,
                              const EdgeSet& h, int p, int l, double eps_sep, const Cut& cut,
                              int pair_index) {
  const EdgeSet boundary_h = cut_boundary(graph, cut, h);
  const auto safe = graph.safe_in(boundary_h).size();
  const auto& pr = graph.pairs()[pair_index];
  if (!cut.separates(pr.s, pr.t) || static_cast<int>(boundary_h.size()) != p + l ||
      static_cast<int>(safe) > p - 1) {
    throw InternalError("separation_oracle: cut " + describe_cut(cut) +
                        " does not satisfy the violated-cut definition; is H (p,l)-flex-connected?");
  }
  CutConstraint con;
  con.cut = cut;
  con.edges = cut_boundary(graph, cut, set_difference(graph.all_edges(), h));
  if (con.edges.empty()) {
    throw InfeasibleError("violated cut " + describe_cut(cut) +
                          " has no candidate edge crossing it; no feasible augmentation exists");
  }
  if (x.coverage(con.edges) >= 1.0 - eps_sep) {
    throw InternalError("separation_oracle: returned cut is already covered");
  }
  return con;
}

}  // namespace

std::optional<CutConstraint> separation_oracle(const FractionalSolution& x, const FlexGraph& graph,
                                               const EdgeSet& h, int p, int l, double eps_sep) {
  std::optional<CutConstraint> found;
  sweep_violated(x, graph, h, p, l, eps_sep, [&](const Cut& cut, int pair_index) {
    found = make_constraint(x, graph, h, p, l, eps_sep, cut, pair_index);
    return false;
  });
  return found;
}

std::vector<CutConstraint> separate_all(const FractionalSolution& x, const FlexGraph& graph,
                                        const EdgeSet& h, int p, int l, double eps_sep) {
  std::vector<CutConstraint> out;
  std::set<EdgeSet> seen;
  sweep_violated(x, graph, h, p, l, eps_sep, [&](const Cut& cut, int pair_index) {
    CutConstraint con = make_constraint(x, graph, h, p, l, eps_sep, cut, pair_index);
    if (seen.insert(con.edges).second) out.push_back(std::move(con));
    return true;
  });
  return out;
}

namespace {

void balance_parallel_candidates(const FlexGraph& graph, const EdgeSet& h, FractionalSolution& sol) {
  std::map<std::tuple<VertexId, VertexId, double>, std::vector<EdgeId>> groups;
  for (const Edge& e : graph.edges()) {
    if (contains(h, e.id)) continue;
    groups[{std::min(e.u, e.v), std::max(e.u, e.v), e.cost}].push_back(e.id);
  }
  for (const auto& [key, ids] : groups) {
    if (ids.size() < 2) continue;
    double mass = 0.0;
    for (EdgeId id : ids) mass += sol.x[id];
    const double share = mass / static_cast<double>(ids.size());
    for (EdgeId id : ids) sol.x[id] = share;
  }
}

}  // namespace

AugmentLpResult solve_augment_lp(const FlexGraph& graph, const EdgeSet& h, int p, int l,
                                 const AugmentLpOptions& options,
                                 std::vector<CutConstraint> initial_pool) {
  if (options.check_precondition) {
    FlexCheck pre = is_flex_connected(graph, h, p, l);
    if (!pre) {
      throw NotFlexConnectedError(
          "solve_augment_lp: H is not (p,l)-flex-connected: " + pre.witness->describe(),
          *pre.witness);
    }
  }
  std::vector<double> costs(static_cast<std::size_t>(graph.num_edges()));
  for (const Edge& e : graph.edges()) costs[e.id] = contains(h, e.id) ? 0.0 : e.cost;

  AugmentLpResult result;
  result.pool = std::move(initial_pool);
  std::set<EdgeSet> seen;
  for (const CutConstraint& c : result.pool) seen.insert(c.edges);

  double previous = -1.0;
  while (true) {
    result.solution = lp_solve(result.pool, costs, options.eps_lp);
    for (EdgeId id : h) result.solution.x[id] = 0.0;
    result.objective_trace.push_back(result.solution.objective);
    if (result.solution.objective < previous - options.eps_lp * (1.0 + previous)) {
      throw InternalError("solve_augment_lp: objective decreased between rounds");
    }
    previous = result.solution.objective;

    std::vector<CutConstraint> fresh =
        separate_all(result.solution, graph, h, p, l, options.eps_sep);
    if (fresh.empty()) break;
    bool added = false;
    for (CutConstraint& c : fresh) {
      if (seen.insert(c.edges).second) {
        result.pool.push_back(std::move(c));
        added = true;
      }
    }
    if (!added) {
      throw InternalError("solve_augment_lp: separation repeated a pooled constraint");
    }
    if (++result.rounds >= options.max_rounds) {
      throw ConvergenceError("solve_augment_lp: constraint generation did not converge within " +
                             std::to_string(options.max_rounds) + " rounds");
    }
  }
  if (options.balance_parallel) balance_parallel_candidates(graph, h, result.solution);
  return result;
}

}  // namespace flexsndp
