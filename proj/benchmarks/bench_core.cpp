#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "statecap/statecap.hpp"

using namespace statecap;

namespace {

ScoreSeries dense_series(const Clip& clip, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScoreSeries s{clip.id(), {}};
  for (auto& w : dense_windows(clip, {count, 32, 0})) s.windows.push_back({w, u(rng)});
  return s;
}

void BM_SelectPnr(benchmark::State& state) {
  const Clip clip("c", 30.0, 240);
  const auto s = dense_series(clip, static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(select_pnr(s, clip));
}
BENCHMARK(BM_SelectPnr)->Arg(16)->Arg(32)->Arg(64);

void BM_DenseWindows(benchmark::State& state) {
  const Clip clip("c", 30.0, 240);
  for (auto _ : state) benchmark::DoNotOptimize(dense_windows(clip, {static_cast<int>(state.range(0)), 32, 0}));
}
BENCHMARK(BM_DenseWindows)->Arg(16)->Arg(32)->Arg(64);

void BM_FusePnr(benchmark::State& state) {
  const Clip clip("c", 30.0, 240);
  const std::vector<ScoreSeries> series{dense_series(clip, 32, 1), dense_series(clip, 16, 2)};
  for (auto _ : state) benchmark::DoNotOptimize(fuse_pnr(series, clip));
}
BENCHMARK(BM_FusePnr);

void BM_OracleError(benchmark::State& state) {
  const Clip clip("c", 30.0, 240);
  const PnrAnnotation ann{"c", 103, {}};
  for (auto _ : state) benchmark::DoNotOptimize(oracle_error(ann, clip, WindowingConfig{}));
}
BENCHMARK(BM_OracleError);

void BM_SimulatePipeline(benchmark::State& state) {
  SimConfig cfg;
  cfg.n_clips = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const Dataset ds = gen_dataset(cfg);
    const auto scores = simulate_scores(ds, WindowingConfig{}, ScorerNoiseModel{}, 1);
    std::map<std::string, PnrPrediction> preds;
    for (const auto& [id, s] : scores) preds.emplace(id, select_pnr(s, ds.clip(id)));
    benchmark::DoNotOptimize(pnr_mae(preds, ds));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePipeline)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
