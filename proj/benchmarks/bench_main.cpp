#include <benchmark/benchmark.h>

#include "percolab/dixmier.hpp"
#include "percolab/isoperimetry.hpp"
#include "percolab/percolation.hpp"
#include "percolab/spectral.hpp"

using namespace percolab;

static void BM_BuildBall(benchmark::State& state) {
  const auto ctx = GroupContext::free_group(2);
  const auto s = standard_generators(ctx);
  for (auto _ : state) benchmark::DoNotOptimize(build_ball(ctx, s, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BuildBall)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_ExhaustiveSearch(benchmark::State& state) {
  const auto ctx = GroupContext::zd(2);
  const auto ball = build_ball(ctx, standard_generators(ctx), 8);
  const int size = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(folner_search_exhaustive(ball, {.max_size = size}));
}
BENCHMARK(BM_ExhaustiveSearch)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_ThetaHat(benchmark::State& state) {
  const auto ctx = GroupContext::free_group(2);
  const PercolationGraph g(build_ball(ctx, standard_generators(ctx), 10));
  const SamplingOptions opts{.samples = 200, .seed = 1};
  for (auto _ : state) benchmark::DoNotOptimize(theta_hat(g, 1.0 / 3, opts));
}
BENCHMARK(BM_ThetaHat)->Unit(benchmark::kMillisecond);

static void BM_ReturnProbabilities(benchmark::State& state) {
  const auto ctx = GroupContext::zd(2);
  const auto s = standard_generators(ctx);
  for (auto _ : state)
    benchmark::DoNotOptimize(return_probabilities(ctx, s, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ReturnProbabilities)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_TranslateAndBuildH(benchmark::State& state) {
  const auto w = paradoxical_witness_f2().witness;
  const auto& ctx = w.context();
  const auto g = ctx.parse_element("ab^-1a^2");
  for (auto _ : state) {
    benchmark::DoNotOptimize(translate(g, w.H()));
    benchmark::DoNotOptimize(build_H(w.pairs()));
  }
}
BENCHMARK(BM_TranslateAndBuildH);
BENCHMARK_MAIN();
