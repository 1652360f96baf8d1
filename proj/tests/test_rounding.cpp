#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "flexsndp/rounding.hpp"
#include "helpers.hpp"

using namespace flexsndp;
using flexsndp::testing::make_tree;

namespace {

bool has_edge(const TreeEdgeSet& s, int f) { return std::binary_search(s.begin(), s.end(), f); }

// root 0 -> internal 1 -> leaves 3, 4; root 0 -> leaf 2.
TreeEmbedding small_tree(double a, double b, double c, double d) {
  return make_tree({-1, 0, 0, 1, 1}, {0, a, b, c, d});
}

}  // namespace

TEST_CASE("full capacity keeps every edge") {
  const TreeEmbedding t = small_tree(1, 1, 1, 1);
  Rng rng = make_rng(1, "round");
  for (int i = 0; i < 20; ++i) {
    CHECK(tree_round(t, t.y, RoundingParams{}, rng) == TreeEdgeSet{1, 2, 3, 4});
  }
}

TEST_CASE("single edge at one half") {
  const TreeEmbedding t = make_tree({-1, 0}, {0, 0.5});
  Rng rng = make_rng(2, "round");
  int kept = 0;
  constexpr int kTrials = 20000;
  for (int i = 0; i < kTrials; ++i) kept += tree_round(t, t.y, RoundingParams{}, rng).empty() ? 0 : 1;
  CHECK(std::abs(kept / static_cast<double>(kTrials) - 0.5) <= 0.02);
}

TEST_CASE("marginals of one repetition follow y") {
  const TreeEmbedding t = small_tree(0.6, 0.3, 0.4, 0.2);
  Rng rng = make_rng(3, "round");
  std::vector<int> count(5, 0);
  constexpr int kTrials = 40000;
  for (int i = 0; i < kTrials; ++i) {
    for (int f : tree_round(t, t.y, RoundingParams{}, rng)) ++count[f];
  }
  for (int f = 1; f < 5; ++f) {
    const double p = t.y[f];
    const double sigma = std::sqrt(p * (1 - p) / kTrials);
    CHECK(std::abs(count[f] / static_cast<double>(kTrials) - p) <= 4 * sigma);
  }
}

TEST_CASE("repetitions bound marginals by R times y") {
  const TreeEmbedding t = small_tree(0.1, 0.05, 0.08, 0.02);
  RoundingParams params;
  params.repetitions = 4;
  Rng rng = make_rng(4, "round");
  std::vector<int> count(5, 0);
  constexpr int kTrials = 20000;
  for (int i = 0; i < kTrials; ++i) {
    for (int f : tree_round(t, t.y, params, rng)) ++count[f];
  }
  for (int f = 1; f < 5; ++f) {
    const double bound = std::min(1.0, params.repetitions * t.y[f]);
    const double sigma = std::sqrt(bound * (1 - bound) / kTrials);
    CHECK(count[f] / static_cast<double>(kTrials) <= bound + 3 * sigma);
  }
}

TEST_CASE("flow parameter rescales probabilities") {
  const TreeEmbedding t = make_tree({-1, 0}, {0, 0.1});
  RoundingParams params;
  params.flow = 0.1;
  Rng rng = make_rng(5, "round");
  for (int i = 0; i < 50; ++i) CHECK(tree_round(t, t.y, params, rng) == TreeEdgeSet{1});
}

TEST_CASE("raising y on a star is monotone under a shared seed") {
  const TreeEmbedding t = make_tree({-1, 0, 0, 0}, {0, 0.2, 0.4, 0.6});
  std::vector<double> raised = t.y;
  raised[1] = 0.5;
  raised[3] = 0.9;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng r1 = make_rng(seed, "mono");
    Rng r2 = make_rng(seed, "mono");
    const TreeEdgeSet low = tree_round(t, t.y, RoundingParams{}, r1);
    const TreeEdgeSet high = tree_round(t, raised, RoundingParams{}, r2);
    CHECK(std::includes(high.begin(), high.end(), low.begin(), low.end()));
  }
}

TEST_CASE("output depends only on tree, y, params and the stream") {
  const TreeEmbedding t = small_tree(0.5, 0.5, 0.3, 0.3);
  RoundingParams params;
  params.repetitions = 3;
  Rng r1 = make_rng(9, "oblivious");
  Rng r2 = make_rng(9, "oblivious");
  for (int i = 0; i < 100; ++i) CHECK(tree_round(t, t.y, params, r1) == tree_round(t, t.y, params, r2));
}

TEST_CASE("kept deep edges imply a kept ancestor in the same repetition") {
  const TreeEmbedding t = small_tree(0.5, 0.2, 0.5, 0.4);
  Rng rng = make_rng(6, "round");
  for (int i = 0; i < 2000; ++i) {
    const TreeEdgeSet s = tree_round(t, t.y, RoundingParams{}, rng);
    if (has_edge(s, 3) || has_edge(s, 4)) CHECK(has_edge(s, 1));
  }
}

TEST_CASE("tree_round preconditions") {
  const TreeEmbedding t = make_tree({-1, 0}, {0, 0.5});
  Rng rng = make_rng(7, "round");
  RoundingParams params;
  params.flow = 0.0;
  CHECK_THROWS_AS(tree_round(t, t.y, params, rng), PreconditionError);
  params = RoundingParams{};
  params.repetitions = 0;
  CHECK_THROWS_AS(tree_round(t, t.y, params, rng), PreconditionError);
  CHECK_THROWS_AS(tree_round(t, {0, -1.0}, RoundingParams{}, rng), PreconditionError);
}

TEST_CASE("for_tree schedule") {
  const TreeEmbedding t = small_tree(1, 1, 1, 1);  // height 2, three leaves
  const RoundingParams p = RoundingParams::for_tree(t, 0.5, 2.0);
  CHECK(p.flow == 0.5);
  CHECK(p.height == 2);
  CHECK(p.repetitions == static_cast<int>(std::ceil(2.0 * 2 * std::log2(3.0))));
}

TEST_CASE("map_to_graph unions paths") {
  TreeEmbedding t = small_tree(1, 1, 1, 1);
  t.path[1] = {4, 2};
  t.path[3] = {2, 7};
  CHECK(map_to_graph(t, {1, 3}) == EdgeSet{2, 4, 7});
  CHECK(map_to_graph(t, {}).empty());
  CHECK_THROWS_AS(map_to_graph(t, {0}), PreconditionError);
}

TEST_CASE("connects examples") {
  // Leaves: node 2 -> vertex 0, node 3 -> vertex 1, node 4 -> vertex 2.
  const TreeEmbedding t = small_tree(1, 1, 1, 1);
  CHECK(connects(t, {3, 4}, {1}, {2}));
  CHECK_FALSE(connects(t, {3, 4}, {0}, {2}));
  CHECK(connects(t, {1, 2, 4}, {0}, {2}));
  CHECK_FALSE(connects(t, {1, 2, 4}, {0}, {2}, {1}));
  CHECK_THROWS_AS(connects(t, {}, {0, 1}, {1}), PreconditionError);
}
