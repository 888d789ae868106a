// Serial vs OpenMP sweep kernels over the acceptance corpora.

#include <benchmark/benchmark.h>

#include "ofd/acceptance.hpp"
#include "ofd/sweep.hpp"

namespace {

const ofd::StreamTask kDeferredPriority = [](std::size_t k) {
  return ofd::dp_share_stream(2 + k % 5, ofd::corpus_seed(1, 0, k));
};

const ofd::StreamTask kPriorityMatching = [](std::size_t k) {
  return ofd::priority_matching_stream(2 + k % 5, ofd::corpus_seed(7, 0, k));
};

void BM_DeferredPrioritySerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ofd::sweep_serial(state.range(0), kDeferredPriority));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DeferredPriorityParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ofd::sweep_parallel(state.range(0), kDeferredPriority));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PriorityMatchingSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ofd::sweep_serial(state.range(0), kPriorityMatching));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PriorityMatchingParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ofd::sweep_parallel(state.range(0), kPriorityMatching));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_DeferredPrioritySerial)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DeferredPriorityParallel)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PriorityMatchingSerial)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PriorityMatchingParallel)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
