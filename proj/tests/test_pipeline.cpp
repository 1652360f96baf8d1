#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "flexsndp/instance.hpp"
#include "flexsndp/oracle.hpp"
#include "flexsndp/pipeline.hpp"
#include "flexsndp/verify.hpp"
#include "helpers.hpp"

using namespace flexsndp;
using flexsndp::testing::make_graph;
using flexsndp::testing::make_tree;
using flexsndp::testing::random_graph;

namespace {

// Two unsafe s-t edges plus `candidates` parallel cost-1 candidates. The LP
// spreads one unit over the candidates, so no value reaches the threshold.
FlexGraph many_parallel_candidates(int candidates) {
  std::vector<Edge> edges;
  for (int i = 0; i < 2 + candidates; ++i) {
    edges.push_back(Edge{i, 0, 1, 1.0, false});
  }
  return FlexGraph(2, std::move(edges), {{0, 1}}, 1, 2);
}

}  // namespace

TEST_CASE("base_solution examples") {
  SUBCASE("cheapest single path") {
    const FlexGraph g = make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 5}}, {{0, 1}});
    CHECK(base_solution(g, 1) == EdgeSet{0});
  }
  SUBCASE("two-connectivity needs the whole triangle") {
    const FlexGraph g = make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 5}}, {{0, 1}}, 2, 0);
    CHECK(base_solution(g, 2) == EdgeSet{0, 1, 2});
  }
  SUBCASE("infeasible") {
    const FlexGraph g = make_graph(3, {{0, 1}, {1, 2}}, {{0, 2}}, 2, 0);
    CHECK_THROWS_AS(base_solution(g, 2), InfeasibleError);
  }
  SUBCASE("exact solver") {
    const FlexGraph g = make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 5}}, {{0, 2}});
    CHECK(base_solution(g, 1, BaseSolver::kExact) == EdgeSet{0, 1});
  }
}

TEST_CASE("primal-dual base stays within 2p of optimal") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40 && checked < 15; ++seed) {
    const FlexGraph g = random_graph(seed, 8, 12, 0.5, 2, 2, 0);
    if (!is_flex_connected(g, g.all_edges(), 2, 0)) continue;
    const EdgeSet base = base_solution(g, 2);
    CHECK(is_flex_connected(g, base, 2, 0));
    const double opt = brute_force_optimum(g, 2, 0).cost;
    CHECK(g.cost(base) <= 4.0 * opt + 1e-9);
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("build_capacity_graph examples") {
  const FlexGraph g = make_graph(2, {{0, 1}, {0, 1}, {0, 1}, {0, 1}});
  FractionalSolution x{{0.0, 0.0, 1.0, 0.0}, 1.0};
  const CapacityGraph cg = build_capacity_graph(g, {0, 1}, x, 1, 1, 4.0);
  CHECK(cg.theta == doctest::Approx(1.0 / 48.0));
  CHECK(cg.copies[2] == 96);
  CHECK(cg.copies[3] == 0);
  CHECK(cg.copies[0] == 1);
  CHECK(cg.graph.num_edges() == 98);
  CHECK(cg.h.size() == 2);
  for (EdgeId id : cg.h) CHECK(cg.capacity[id] == doctest::Approx(cg.theta));
  double share = 0.0;
  for (EdgeId id = 0; id < cg.graph.num_edges(); ++id) {
    if (cg.origin[id] == 2) {
      CHECK(cg.capacity[id] == doctest::Approx(1.0 / 96.0));
      share += cg.capacity[id];
    }
    CHECK(cg.origin[id] != 3);
  }
  CHECK(share == doctest::Approx(1.0));
}

TEST_CASE("tiny values are dropped and the rest rescaled") {
  const FlexGraph g = make_graph(2, {{0, 1}, {0, 1}, {0, 1}, {0, 1}});
  FractionalSolution x{{0.0, 0.0, 0.001, 0.999}, 1.0};
  const CapacityGraph cg = build_capacity_graph(g, {0, 1}, x, 1, 1, 4.0);
  CHECK(cg.zeroed == 1);
  CHECK(cg.adjusted_x[2] == 0.0);
  CHECK(cg.adjusted_x[3] == doctest::Approx(0.999 * 1.5));
}

TEST_CASE("pooled cuts keep their tiny values") {
  const FlexGraph g = many_parallel_candidates(10);
  FractionalSolution x;
  x.x.assign(12, 0.1);
  x.x[0] = x.x[1] = 0.0;
  const std::vector<CutConstraint> pool{
      CutConstraint{{2, 3, 4, 5, 6, 7, 8, 9, 10, 11}, Cut::from_vertices(2, {0})}};
  const CapacityGraph cg = build_capacity_graph(g, {0, 1}, x, 1, 1, 4.0, pool);
  CHECK(cg.zeroed == 0);
  CHECK(cg.restored == 10);
  for (EdgeId id = 2; id < 12; ++id) CHECK(cg.adjusted_x[id] == doctest::Approx(0.15));
}

TEST_CASE("schedules") {
  CHECK(rounding_schedule(2, 4.0, 3, 0.125) ==
        static_cast<int>(std::ceil((std::log(8.0) + 24.0 * std::log(2.0)) / 0.125)));
  CHECK(tree_schedule(10, 3) ==
        static_cast<int>(std::ceil(8.0 / 3.0 * (std::log(2.0) + 6.0 * std::log(10.0)))));
}

TEST_CASE("augment_stage short-circuits when the large edges suffice") {
  const FlexGraph g = make_graph(2, {{0, 1, 1}, {0, 1, 1}, {0, 1, 5}}, {{0, 1}}, 1, 2);
  const StageOutcome out = augment_stage(g, {0, 1}, 1, 1, PipelineParams{});
  CHECK(out.report.short_circuit);
  CHECK(out.report.attempts == 0);
  CHECK(out.h == EdgeSet{0, 1, 2});
  CHECK(out.report.added_cost == doctest::Approx(5.0));
}

TEST_CASE("augment_stage is a no-op when nothing is violated") {
  const FlexGraph g = make_graph(2, {{0, 1, 1, true}, {0, 1, 4}}, {{0, 1}}, 1, 2);
  const StageOutcome out = augment_stage(g, {0}, 1, 1, PipelineParams{});
  CHECK(out.h == EdgeSet{0});
  CHECK(out.report.added.empty());
  CHECK(out.report.lp_objective == 0.0);
}

TEST_CASE("augment_stage samples trees when every value is small") {
  const FlexGraph g = many_parallel_candidates(60);
  PipelineParams params;
  params.seed = 3;
  const StageOutcome out = augment_stage(g, {0, 1}, 1, 1, params);
  CHECK_FALSE(out.report.short_circuit);
  CHECK(out.report.num_large == 0);
  CHECK(out.report.theta == doctest::Approx(1.0 / 48.0));
  CHECK(out.report.attempts >= 1);
  CHECK(out.report.trees_sampled >= out.report.t_prime);
  CHECK_FALSE(out.report.added.empty());
  CHECK(is_flex_connected(g, out.h, 1, 2));
  // Same seed, same outcome.
  const StageOutcome again = augment_stage(g, {0, 1}, 1, 1, params);
  CHECK(again.h == out.h);
}

TEST_CASE("augment_stage reports failure after the retry cap") {
  // A congestion target below 1 cannot be met, so every attempt fails.
  const FlexGraph g = many_parallel_candidates(60);
  PipelineParams params;
  params.c_beta = 0.1;
  params.retry_cap = 3;
  try {
    augment_stage(g, {0, 1}, 1, 1, params);
    FAIL("expected StageFailure");
  } catch (const StageFailure& err) {
    CHECK(err.report().attempts == 3);
    CHECK(err.report().beta_hat.size() == 3);
    for (double b : err.report().beta_hat) CHECK(b >= 1.0 - 1e-9);
  }
}

TEST_CASE("solve_flex_sndp end to end") {
  SUBCASE("q = 0 is the base") {
    const FlexGraph g = make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 5}}, {{0, 2}}, 1, 0);
    const SolveResult r = solve_flex_sndp(g, PipelineParams{});
    CHECK(r.h == EdgeSet{0, 1});
    CHECK(r.stages.empty());
  }
  SUBCASE("all-safe instances need no augmentation") {
    GeneratorSpec spec;
    spec.safe_fraction = 1.0;
    spec.q = 2;
    const FlexGraph g = generate_instance(spec).graph;
    const SolveResult r = solve_flex_sndp(g, PipelineParams{});
    for (const StageReport& s : r.stages) CHECK(s.added.empty());
    CHECK(r.total_cost == doctest::Approx(r.base_cost));
  }
  SUBCASE("infeasible instance") {
    const FlexGraph g = make_graph(2, {{0, 1}}, {{0, 1}}, 1, 1);
    CHECK_THROWS_AS(solve_flex_sndp(g, PipelineParams{}), InfeasibleError);
  }
  SUBCASE("random instances") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      GeneratorSpec spec;
      spec.seed = seed;
      spec.size = 7 + static_cast<int>(seed % 3);
      spec.p = 1 + static_cast<int>(seed % 2);
      spec.q = 1 + static_cast<int>((seed / 2) % 2);
      const FlexGraph g = generate_instance(spec).graph;
      PipelineParams params;
      params.seed = seed;
      const SolveResult r = solve_flex_sndp(g, params);
      CHECK(is_flex_connected(g, r.h, spec.p, spec.q));
      CHECK(r.stages.size() == static_cast<std::size_t>(spec.q));
      CHECK(r.total_cost == doctest::Approx(g.cost(r.h)));
    }
  }
}

TEST_CASE("pipeline parameters are validated") {
  const FlexGraph g = make_graph(2, {{0, 1}}, {{0, 1}}, 1, 0);
  PipelineParams bad;
  bad.phi = 1.5;
  CHECK_THROWS_AS(solve_flex_sndp(g, bad), PreconditionError);
  bad = PipelineParams{};
  bad.retry_cap = 0;
  CHECK_THROWS_AS(solve_flex_sndp(g, bad), PreconditionError);
}

TEST_CASE("stage_diagnostics examples") {
  SUBCASE("good tree whose only route is forbidden") {
    const FlexGraph g = make_graph(2, {{0, 1}, {0, 1}});
    TreeEmbedding t = make_tree({-1, 0, 0}, {0, 0.2, 0.2});
    t.path[2] = {0};
    Rng rng = make_rng(1, "diag");
    const ViolatingEdgeSet f{{0, 1}, Cut::from_vertices(2, {0}), 0};
    const StageDiagnostics d = stage_diagnostics(g, {0, 1}, t, f, 1, 1, 4.0, 0.1, rng, 3);
    CHECK(d.forbidden == std::vector<int>{2});
    CHECK(d.is_good);
    CHECK(d.components.size() == 2);
    CHECK(d.shattered.empty());
    CHECK(d.flow_checks == 3);
    CHECK(d.flow_violations == 3);
  }
  SUBCASE("bad tree") {
    const FlexGraph g = make_graph(2, {{0, 1}, {0, 1}});
    TreeEmbedding t = make_tree({-1, 0, 0}, {0, 0.4, 0.4});
    t.path[1] = {1};
    t.path[2] = {0};
    Rng rng = make_rng(2, "diag");
    const ViolatingEdgeSet f{{0, 1}, Cut::from_vertices(2, {0}), 0};
    const StageDiagnostics d = stage_diagnostics(g, {0, 1}, t, f, 1, 1, 4.0, 0.1, rng, 3);
    CHECK_FALSE(d.is_good);
    CHECK(d.blocked_capacity == doctest::Approx(0.8));
    CHECK(d.flow_checks == 0);
  }
  SUBCASE("shattered component") {
    // H = 0-1, 1-2, 0-2; F = {0-2}; H \ F stays connected but the tree cuts
    // vertex 2 away.
    const FlexGraph g = make_graph(3, {{0, 1}, {1, 2}, {0, 2}}, {{0, 2}});
    TreeEmbedding t = make_tree({-1, 0, 0, 0}, {0, 0.1, 0.1, 0.1});
    t.path[2] = {0};
    t.path[3] = {2};
    Rng rng = make_rng(3, "diag");
    const ViolatingEdgeSet f{{2}, Cut::from_vertices(3, {2}), 0};
    const StageDiagnostics d = stage_diagnostics(g, {0, 1, 2}, t, f, 1, 0, 4.0, 0.1, rng, 0);
    CHECK(d.forbidden == std::vector<int>{3});
    CHECK(d.is_good);
    CHECK(d.components.size() == 1);
    CHECK(d.shattered.size() == 1);
    CHECK(d.shattered_bound == doctest::Approx(16.0));
    CHECK(d.bound_holds);
  }
}
