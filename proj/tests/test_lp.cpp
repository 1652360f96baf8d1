#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>

#include "doctest.h"
#include "flexsndp/lp.hpp"
#include "flexsndp/oracle.hpp"
#include "flexsndp/simplex.hpp"
#include "flexsndp/verify.hpp"
#include "helpers.hpp"

using namespace flexsndp;
using flexsndp::testing::make_graph;
using flexsndp::testing::random_graph;

namespace {

CutConstraint constraint(EdgeSet edges) { return CutConstraint{std::move(edges), Cut()}; }

// Minimum of sum x over the odd-cycle cover polytope, by trying every choice
// of three tight inequalities among the nine defining ones.
double odd_cycle_vertex_minimum() {
  std::vector<std::array<double, 4>> rows;  // a . x >= b stored as {a0,a1,a2,b}
  rows.push_back({1, 1, 0, 1});
  rows.push_back({0, 1, 1, 1});
  rows.push_back({1, 0, 1, 1});
  for (int i = 0; i < 3; ++i) {
    std::array<double, 4> lo{0, 0, 0, 0};
    lo[i] = 1;
    rows.push_back(lo);
    std::array<double, 4> hi{0, 0, 0, -1};
    hi[i] = -1;
    rows.push_back(hi);
  }
  double best = INFINITY;
  const int r = static_cast<int>(rows.size());
  for (int a = 0; a < r; ++a) {
    for (int b = a + 1; b < r; ++b) {
      for (int c = b + 1; c < r; ++c) {
        double m[3][4];
        const int pick[3] = {a, b, c};
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 4; ++j) m[i][j] = rows[pick[i]][j];
        }
        bool singular = false;
        for (int col = 0; col < 3 && !singular; ++col) {
          int piv = col;
          for (int i = col + 1; i < 3; ++i) {
            if (std::abs(m[i][col]) > std::abs(m[piv][col])) piv = i;
          }
          if (std::abs(m[piv][col]) < 1e-12) {
            singular = true;
            break;
          }
          for (int j = 0; j < 4; ++j) std::swap(m[col][j], m[piv][j]);
          for (int i = 0; i < 3; ++i) {
            if (i == col) continue;
            const double f = m[i][col] / m[col][col];
            for (int j = 0; j < 4; ++j) m[i][j] -= f * m[col][j];
          }
        }
        if (singular) continue;
        double x[3];
        for (int i = 0; i < 3; ++i) x[i] = m[i][3] / m[i][i];
        bool feasible = true;
        for (const auto& row : rows) {
          feasible = feasible && row[0] * x[0] + row[1] * x[1] + row[2] * x[2] >= row[3] - 1e-9;
        }
        if (feasible) best = std::min(best, x[0] + x[1] + x[2]);
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("dense simplex basics") {
  // max x + y s.t. x <= 2, y <= 3, x + y <= 4
  const DenseSimplex::Result r =
      DenseSimplex::maximize({{1, 0}, {0, 1}, {1, 1}}, {2, 3, 4}, {1, 1});
  REQUIRE(r.status == DenseSimplex::Status::kOptimal);
  CHECK(r.objective == doctest::Approx(4.0));
  const DenseSimplex::Result u = DenseSimplex::maximize({{1, -1}}, {1}, {1, 0});
  CHECK(u.status == DenseSimplex::Status::kUnbounded);
}

TEST_CASE("lp_solve examples") {
  SUBCASE("single constraint") {
    const std::vector<CutConstraint> pool{constraint({0})};
    const FractionalSolution s = lp_solve(pool, {2.0});
    CHECK(s.x[0] == doctest::Approx(1.0));
    CHECK(s.objective == doctest::Approx(2.0));
  }
  SUBCASE("two singletons") {
    const std::vector<CutConstraint> pool{constraint({0}), constraint({1})};
    CHECK(lp_solve(pool, {1.0, 1.0}).objective == doctest::Approx(2.0));
  }
  SUBCASE("odd cycle") {
    const std::vector<CutConstraint> pool{constraint({0, 1}), constraint({1, 2}),
                                          constraint({0, 2})};
    const FractionalSolution s = lp_solve(pool, {1.0, 1.0, 1.0});
    CHECK(s.objective == doctest::Approx(1.5));
    for (double v : s.x) CHECK(v == doctest::Approx(0.5));
    CHECK(odd_cycle_vertex_minimum() == doctest::Approx(1.5));
  }
  SUBCASE("empty support") {
    const std::vector<CutConstraint> pool{constraint({})};
    CHECK_THROWS_AS(lp_solve(pool, {1.0}), InfeasibleError);
  }
  SUBCASE("empty pool") {
    const FractionalSolution s = lp_solve({}, {1.0, 2.0});
    CHECK(s.objective == 0.0);
  }
}

TEST_CASE("solve_augment_lp examples") {
  SUBCASE("single covering edge") {
    const FlexGraph g = make_graph(2, {{0, 1, 1}, {0, 1, 1}, {0, 1, 5}});
    const AugmentLpResult r = solve_augment_lp(g, {0, 1}, 1, 1);
    CHECK(r.solution.x[2] == doctest::Approx(1.0));
    CHECK(r.solution.objective == doctest::Approx(5.0));
    CHECK(r.pool.size() == 1);
  }
  SUBCASE("cheaper cover wins") {
    const FlexGraph g = make_graph(2, {{0, 1, 1}, {0, 1, 1}, {0, 1, 5}, {0, 1, 3}});
    const AugmentLpResult r = solve_augment_lp(g, {0, 1}, 1, 1);
    CHECK(r.solution.objective == doctest::Approx(3.0));
    CHECK(r.solution.x[3] == doctest::Approx(1.0));
  }
  SUBCASE("nothing to do") {
    const FlexGraph g = make_graph(2, {{0, 1, 1, true}, {0, 1, 4}});
    const AugmentLpResult r = solve_augment_lp(g, {0}, 1, 1);
    CHECK(r.solution.objective == 0.0);
    CHECK(r.pool.empty());
  }
  SUBCASE("no candidate crosses a violated cut") {
    const FlexGraph g = make_graph(2, {{0, 1, 1}, {0, 1, 1}});
    CHECK_THROWS_AS(solve_augment_lp(g, {0, 1}, 1, 1), InfeasibleError);
  }
  SUBCASE("precondition") {
    const FlexGraph g = make_graph(2, {{0, 1, 1}, {0, 1, 1}});
    CHECK_THROWS_AS(solve_augment_lp(g, {0}, 1, 1), NotFlexConnectedError);
  }
  SUBCASE("parallel candidates share their mass") {
    const FlexGraph g = make_graph(2, {{0, 1, 1}, {0, 1, 1}, {0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
    const AugmentLpResult r = solve_augment_lp(g, {0, 1}, 1, 1);
    CHECK(r.solution.objective == doctest::Approx(2.0));
    for (EdgeId id : {2, 3, 4}) CHECK(r.solution.x[id] == doctest::Approx(1.0 / 3.0));
  }
}

TEST_CASE("separation_oracle examples") {
  const FlexGraph g = make_graph(2, {{0, 1, 1}, {0, 1, 1}, {0, 1, 5}});
  FractionalSolution x{{0.0, 0.0, 0.0}, 0.0};
  const auto con = separation_oracle(x, g, {0, 1}, 1, 1);
  REQUIRE(con);
  CHECK(con->edges == EdgeSet{2});
  CHECK(con->cut.separates(0, 1));
  x.x[2] = 1.0;
  CHECK_FALSE(separation_oracle(x, g, {0, 1}, 1, 1));
}

TEST_CASE("separation agrees with brute force on random configurations") {
  int configs = 0;
  int violated = 0;
  for (std::uint64_t seed = 0; configs < 80; ++seed) {
    const int n = 5 + static_cast<int>(seed % 6);
    const FlexGraph g = random_graph(seed, n, n + 4, 0.4, 2);
    Rng rng = make_rng(seed, "sep");
    const int p = 1 + static_cast<int>(seed % 2);
    const int l = static_cast<int>((seed / 2) % 2);
    EdgeSet h;
    for (EdgeId id : g.all_edges()) {
      if (uniform01(rng) < 0.6) h.push_back(id);
    }
    if (!is_flex_connected(g, h, p, l)) continue;
    FractionalSolution x;
    x.x.assign(static_cast<std::size_t>(g.num_edges()), 0.0);
    for (EdgeId id : set_difference(g.all_edges(), h)) {
      const double u = uniform01(rng);
      x.x[id] = u < 0.4 ? 0.0 : (u < 0.5 ? 1.0 : 0.8 * uniform01(rng));
    }
    std::optional<CutConstraint> fast;
    try {
      fast = separation_oracle(x, g, h, p, l);
    } catch (const InfeasibleError&) {
      continue;  // a violated cut with no candidate; brute force sees coverage 0
    }
    const auto slow = brute_force_separation(x, g, h, p, l);
    CHECK(fast.has_value() == slow.has_value());
    if (fast) {
      const EdgeSet boundary = cut_boundary(g, fast->cut, h);
      CHECK(static_cast<int>(boundary.size()) == p + l);
      CHECK(static_cast<int>(g.safe_in(boundary).size()) <= p - 1);
      CHECK(x.coverage(fast->edges) < 1.0 - kSeparationEpsilon);
      ++violated;
    }
    ++configs;
  }
  MESSAGE("violated configurations: " << violated << " of " << configs);
  CHECK(violated >= 10);
  CHECK(violated <= 70);
}

TEST_CASE("final LP solution is clear and bounded by the best augmentation") {
  int solved = 0;
  for (std::uint64_t seed = 0; solved < 20 && seed < 200; ++seed) {
    const FlexGraph g = random_graph(seed, 7, 9, 0.4, 2);
    Rng rng = make_rng(seed, "pick");
    EdgeSet h;
    for (EdgeId id : g.all_edges()) {
      if (uniform01(rng) < 0.5) h.push_back(id);
    }
    const int p = 1;
    const int l = 1;
    if (!is_flex_connected(g, h, p, l)) continue;
    if (!is_flex_connected(g, g.all_edges(), p, l + 1)) continue;
    const AugmentLpResult r = solve_augment_lp(g, h, p, l);
    CHECK_FALSE(brute_force_separation(r.solution, g, h, p, l));
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      CHECK(r.objective_trace[i] >= r.objective_trace[i - 1] - 1e-7);
    }
    const OptimumResult best = brute_force_augmentation(g, h, p, l);
    CHECK(r.solution.objective <= best.cost + 1e-6);
    for (double v : r.solution.x) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 + kLpEpsilon);
    }
    ++solved;
  }
  CHECK(solved == 20);
}
