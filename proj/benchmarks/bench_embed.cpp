#include <benchmark/benchmark.h>

#include "flexsndp/embed.hpp"
#include "flexsndp/instance.hpp"
#include "flexsndp/rounding.hpp"

namespace {

flexsndp::FlexGraph gnm(int n) {
  flexsndp::GeneratorSpec spec;
  spec.size = n;
  spec.seed = 21;
  return flexsndp::generate_instance(spec).graph;
}

void BM_RackeBuild(benchmark::State& state) {
  const flexsndp::FlexGraph g = gnm(static_cast<int>(state.range(0)));
  const flexsndp::CapacityMap cap(static_cast<std::size_t>(g.num_edges()), 1.0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    flexsndp::Rng rng = flexsndp::make_rng(seed++, "bench-embed");
    benchmark::DoNotOptimize(flexsndp::build_racke_distribution(g, cap, rng).congestion);
  }
}
BENCHMARK(BM_RackeBuild)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_TreeRound(benchmark::State& state) {
  const flexsndp::FlexGraph g = gnm(static_cast<int>(state.range(0)));
  const flexsndp::CapacityMap cap(static_cast<std::size_t>(g.num_edges()), 0.1);
  flexsndp::Rng rng = flexsndp::make_rng(1, "bench-embed");
  const flexsndp::TreeDistribution d = flexsndp::build_racke_distribution(g, cap, rng);
  const flexsndp::TreeEmbedding t = flexsndp::sample_tree(d, rng);
  const flexsndp::RoundingParams params = flexsndp::RoundingParams::for_tree(t, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(flexsndp::tree_round(t, t.y, params, rng).size());
}
BENCHMARK(BM_TreeRound)->Arg(16)->Arg(32);

}  // namespace
