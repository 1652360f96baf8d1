#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "flexsndp/oracle.hpp"
#include "flexsndp/verify.hpp"
#include "helpers.hpp"

using namespace flexsndp;
using flexsndp::testing::make_graph;
using flexsndp::testing::random_graph;

namespace {

FlexGraph relabel(const FlexGraph& g, bool all_safe) {
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (Edge& e : edges) e.safe = all_safe;
  return FlexGraph(g.num_vertices(), std::move(edges), {g.pairs().begin(), g.pairs().end()}, g.p(),
                   g.q());
}

}  // namespace

TEST_CASE("brute_force_optimum examples") {
  SUBCASE("one safe edge") {
    const FlexGraph g = make_graph(2, {{0, 1, 3, true}});
    const OptimumResult r = brute_force_optimum(g, 1, 1);
    CHECK(r.edges == EdgeSet{0});
    CHECK(r.cost == doctest::Approx(3.0));
  }
  SUBCASE("two unsafe edges beat a safe one") {
    const FlexGraph g = make_graph(2, {{0, 1, 1}, {0, 1, 2}, {0, 1, 4, true}});
    const OptimumResult r = brute_force_optimum(g, 1, 1);
    CHECK(r.edges == EdgeSet{0, 1});
    CHECK(r.cost == doctest::Approx(3.0));
  }
  SUBCASE("ties go to the smallest id list") {
    const FlexGraph g = make_graph(2, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
    CHECK(brute_force_optimum(g, 1, 0).edges == EdgeSet{0});
    CHECK(brute_force_optimum(g, 1, 1).edges == EdgeSet{0, 1});
  }
  SUBCASE("infeasible") {
    const FlexGraph g = make_graph(2, {{0, 1}});
    CHECK_THROWS_AS(brute_force_optimum(g, 1, 1), InfeasibleError);
  }
}

TEST_CASE("oracle guards") {
  const FlexGraph big = [] {
    std::vector<Edge> edges;
    for (int v = 1; v < 15; ++v) edges.push_back(Edge{v - 1, v - 1, v, 1.0, false});
    return FlexGraph(15, std::move(edges), {{0, 14}}, 1, 0);
  }();
  CHECK_THROWS_AS(brute_force_optimum(big, 1, 0), GuardError);
  const FlexGraph wide = random_graph(1, 8, 16);
  CHECK_THROWS_AS(brute_force_optimum(wide, 1, 0), GuardError);
  CHECK_NOTHROW(brute_force_optimum(wide, 1, 0, 23));
}

TEST_CASE("optimum is feasible and no cheaper feasible subset is missed") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const FlexGraph g = random_graph(seed, 5 + static_cast<int>(seed % 3), 7, 0.4, 2);
    const int p = 1;
    const int q = 1 + static_cast<int>(seed % 2);
    if (!is_flex_connected(g, g.all_edges(), p, q)) continue;
    const OptimumResult r = brute_force_optimum(g, p, q);
    CHECK(is_flex_connected(g, r.edges, p, q));
    CHECK(r.cost == doctest::Approx(g.cost(r.edges)));
    // Dropping any single edge breaks feasibility or leaves cost unchanged.
    for (EdgeId id : r.edges) {
      if (g.edge(id).cost > 0) CHECK_FALSE(is_flex_connected(g, set_difference(r.edges, {id}), p, q));
    }
  }
}

TEST_CASE("all-safe and all-unsafe instances reduce to edge connectivity") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const FlexGraph g = random_graph(seed, 6, 8, 0.5, 2);
    const FlexGraph safe = relabel(g, true);
    const FlexGraph unsafe = relabel(g, false);
    for (int q = 1; q <= 2; ++q) {
      if (is_flex_connected(safe, safe.all_edges(), 1, 0)) {
        CHECK(brute_force_optimum(safe, 1, q).cost ==
              doctest::Approx(brute_force_optimum(safe, 1, 0).cost));
      }
      if (is_flex_connected(unsafe, unsafe.all_edges(), 1 + q, 0)) {
        CHECK(brute_force_optimum(unsafe, 1, q).cost ==
              doctest::Approx(brute_force_optimum(unsafe, 1 + q, 0).cost));
      }
    }
  }
}

TEST_CASE("brute_force_augmentation examples") {
  const FlexGraph g = make_graph(2, {{0, 1, 1}, {0, 1, 1}, {0, 1, 5}, {0, 1, 3}});
  const OptimumResult r = brute_force_augmentation(g, {0, 1}, 1, 1);
  CHECK(r.edges == EdgeSet{3});
  CHECK(r.cost == doctest::Approx(3.0));
  const OptimumResult none = brute_force_augmentation(g, {0, 1, 3}, 1, 1);
  CHECK(none.edges.empty());
  CHECK(none.cost == 0.0);
}

TEST_CASE("brute_force_is_flex_connected matches the flow-based check") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const FlexGraph g = random_graph(seed, 4 + static_cast<int>(seed % 6), 8, 0.5, 2);
    Rng rng = make_rng(seed, "oracle-h");
    EdgeSet h;
    for (EdgeId id : g.all_edges()) {
      if (uniform01(rng) < 0.7) h.push_back(id);
    }
    for (int p = 1; p <= 2; ++p) {
      for (int q = 0; q <= 2; ++q) {
        CHECK(brute_force_is_flex_connected(g, h, p, q) == is_flex_connected(g, h, p, q).connected);
      }
    }
  }
}
