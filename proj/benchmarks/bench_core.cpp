#include <benchmark/benchmark.h>

#include "dbalign/hungarian.hpp"
#include "dbalign/model.hpp"
#include "dbalign/recovery.hpp"
#include "dbalign/theory.hpp"

using namespace dbalign;

namespace {

DatabasePair pair(std::size_t n, std::size_t d) {
  ModelParams p;
  p.n = n;
  p.d = d;
  p.rho = 0.6;
  return sample_h1(p, 1);
}

void BM_ScoreTable(benchmark::State& state) {
  const auto db = pair(state.range(0), 50);
  for (auto _ : state) benchmark::DoNotOptimize(score_table(db));
}
BENCHMARK(BM_ScoreTable)->Arg(50)->Arg(200)->Arg(800);

void BM_Hungarian(benchmark::State& state) {
  const auto s = score_table(pair(state.range(0), 50));
  for (auto _ : state) benchmark::DoNotOptimize(hungarian_max(s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(25, 800)->Complexity(benchmark::oNCubed);

void BM_ThresholdAndClean(benchmark::State& state) {
  const auto s = score_table(pair(state.range(0), 50));
  for (auto _ : state) benchmark::DoNotOptimize(threshold_and_clean(s, 0.55));
}
BENCHMARK(BM_ThresholdAndClean)->Arg(200)->Arg(800);

void BM_TwoStage(benchmark::State& state) {
  const auto s = score_table(pair(200, 50));
  for (auto _ : state) benchmark::DoNotOptimize(two_stage_full(s, 0.6));
}
BENCHMARK(BM_TwoStage);

void BM_PProb(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(p_prob(d, 0.7, 0.55));
}
BENCHMARK(BM_PProb)->Arg(10)->Arg(50)->Arg(1000);

void BM_Type1Bound(benchmark::State& state) {
  const LocalProbs pq = local_probs(50, 0.7, 0.55);
  for (auto _ : state) benchmark::DoNotOptimize(type1_bound(200, pq, 0.5));
}
BENCHMARK(BM_Type1Bound);

}  // namespace
BENCHMARK_MAIN();
