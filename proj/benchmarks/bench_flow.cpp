#include <benchmark/benchmark.h>

#include "flexsndp/instance.hpp"
#include "flexsndp/verify.hpp"

namespace {

flexsndp::FlexGraph gnm(int n, int p, int q) {
  flexsndp::GeneratorSpec spec;
  spec.size = n;
  spec.p = p;
  spec.q = q;
  spec.seed = 11;
  return flexsndp::generate_instance(spec).graph;
}

void BM_MaxFlow(benchmark::State& state) {
  const flexsndp::FlexGraph g = gnm(static_cast<int>(state.range(0)), 1, 1);
  const flexsndp::CapacityMap cap(static_cast<std::size_t>(g.num_edges()), 1.0);
  const int t = g.num_vertices() - 1;
  for (auto _ : state) benchmark::DoNotOptimize(flexsndp::max_flow(g, cap, {0}, {t}).value);
}
BENCHMARK(BM_MaxFlow)->Arg(16)->Arg(64)->Arg(256);

void BM_IsFlexConnected(benchmark::State& state) {
  const int q = static_cast<int>(state.range(1));
  const flexsndp::FlexGraph g = gnm(static_cast<int>(state.range(0)), 1, q);
  const flexsndp::EdgeSet all = g.all_edges();
  for (auto _ : state) benchmark::DoNotOptimize(flexsndp::is_flex_connected(g, all, 1, q).connected);
}
BENCHMARK(BM_IsFlexConnected)->Args({12, 1})->Args({12, 2})->Args({24, 2});

}  // namespace
