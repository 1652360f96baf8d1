#include <benchmark/benchmark.h>

#include "flexsndp/instance.hpp"
#include "flexsndp/pipeline.hpp"

namespace {

void BM_SolvePinnedSuite(benchmark::State& state) {
  std::vector<flexsndp::FlexGraph> graphs;
  std::vector<std::uint64_t> seeds;
  for (const flexsndp::SuiteEntry& e : flexsndp::pinned_suite()) {
    graphs.push_back(flexsndp::generate_instance(e.spec).graph);
    seeds.push_back(e.spec.seed);
  }
  for (auto _ : state) {
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      flexsndp::PipelineParams params;
      params.seed = seeds[i];
      benchmark::DoNotOptimize(flexsndp::solve_flex_sndp(graphs[i], params).total_cost);
    }
  }
}
BENCHMARK(BM_SolvePinnedSuite)->Unit(benchmark::kMillisecond);

// Sixty parallel candidates keep every LP value below the threshold, so the
// stage goes through tree sampling and rounding.
void BM_SamplingStage(benchmark::State& state) {
  std::vector<flexsndp::Edge> edges;
  for (int i = 0; i < 62; ++i) edges.push_back(flexsndp::Edge{i, 0, 1, 1.0, false});
  const flexsndp::FlexGraph g(2, std::move(edges), {{0, 1}}, 1, 2);
  flexsndp::PipelineParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(flexsndp::augment_stage(g, {0, 1}, 1, 1, params).h.size());
    ++params.seed;
  }
}
BENCHMARK(BM_SamplingStage)->Unit(benchmark::kMillisecond);

}  // namespace
