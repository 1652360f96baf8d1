#include <benchmark/benchmark.h>

#include "flexsndp/instance.hpp"
#include "flexsndp/lp.hpp"
#include "flexsndp/pipeline.hpp"

namespace {

// Stage-0 LP on top of the base solution of a generated instance.
void BM_AugmentLp(benchmark::State& state) {
  flexsndp::GeneratorSpec spec;
  spec.size = static_cast<int>(state.range(0));
  spec.p = 1;
  spec.q = 1;
  spec.seed = 5;
  const flexsndp::FlexGraph g = flexsndp::generate_instance(spec).graph;
  const flexsndp::EdgeSet h = flexsndp::base_solution(g, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flexsndp::solve_augment_lp(g, h, 1, 0).solution.objective);
  }
}
BENCHMARK(BM_AugmentLp)->Arg(8)->Arg(12)->Arg(16);

void BM_SeparationOracle(benchmark::State& state) {
  flexsndp::GeneratorSpec spec;
  spec.size = static_cast<int>(state.range(0));
  spec.p = 1;
  spec.q = 2;
  spec.seed = 6;
  const flexsndp::FlexGraph g = flexsndp::generate_instance(spec).graph;
  flexsndp::EdgeSet h = flexsndp::base_solution(g, 1);
  h = flexsndp::augment_stage(g, h, 1, 0, flexsndp::PipelineParams{}).h;
  flexsndp::FractionalSolution x;
  x.x.assign(static_cast<std::size_t>(g.num_edges()), 0.0);
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(flexsndp::separation_oracle(x, g, h, 1, 1).has_value());
    } catch (const flexsndp::InfeasibleError&) {
    }
  }
}
BENCHMARK(BM_SeparationOracle)->Arg(8)->Arg(12)->Arg(16);

}  // namespace
