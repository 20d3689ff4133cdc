#include <benchmark/benchmark.h>

#include "occam/occam.hpp"

namespace {

occam::LabeledDataset make(std::size_t n, std::size_t d, std::size_t c) {
  occam::CounterRng rng(1, 0);
  std::vector<double> x(n * d);
  for (auto& v : x) v = rng.next_normal();
  std::vector<std::int64_t> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<std::int64_t>(i % c);
  return {occam::EmbeddingMatrix(n, d, std::move(x)), occam::LabelVector(std::move(y))};
}

void BM_PairwiseEuclidean(benchmark::State& state) {
  const auto ds = make(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 10);
  for (auto _ : state) {
    auto dm = occam::pairwise_distances(ds.embeddings, occam::DistanceMetric::Euclidean);
    benchmark::DoNotOptimize(dm(0, 1));
  }
}
BENCHMARK(BM_PairwiseEuclidean)->Args({500, 128})->Args({1000, 128})->Args({2000, 128})->Unit(benchmark::kMillisecond);

void BM_Int(benchmark::State& state) {
  const auto ds = make(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 10);
  const occam::IntScoreConfig cfg{static_cast<occam::DistanceMetric>(state.range(2)), {}};
  for (auto _ : state) benchmark::DoNotOptimize(occam::int_value(ds, cfg));
}
BENCHMARK(BM_Int)
    ->ArgsProduct({{1000, 2000, 5000}, {768}, {0}})
    ->Args({2000, 768, 2})
    ->Args({2000, 768, 3})
    ->Unit(benchmark::kMillisecond);

void BM_ConceptVariation(benchmark::State& state) {
  const auto ds = make(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 10);
  for (auto _ : state) benchmark::DoNotOptimize(occam::concept_variation(ds, {}).std);
}
BENCHMARK(BM_ConceptVariation)->ArgsProduct({{1000, 2000, 5000}, {768}})->Unit(benchmark::kMillisecond);

void BM_BlockSize(benchmark::State& state) {
  const auto ds = make(3000, 256, 10);
  occam::ExecPolicy p;
  p.block_size = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(occam::int_value(ds, {}, p));
}
BENCHMARK(BM_BlockSize)->Arg(16)->Arg(64)->Arg(256)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
