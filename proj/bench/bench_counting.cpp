// Serial reference loops against the OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <omp.h>

#include <map>

#include "cspr/counting.hpp"
#include "cspr/simulation.hpp"

using namespace cspr;

namespace {

const Sequence& sequence_of(std::size_t n) {
    static std::map<std::size_t, Sequence> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, sample_markov(symmetrize_joint(random_joint(1)), n, 1)).first;
    return it->second;
}

void BM_CountPairsSerial(benchmark::State& state) {
    const auto& s = sequence_of(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(serial::count_pairs(s));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CountPairsParallel(benchmark::State& state) {
    const auto& s = sequence_of(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(count_pairs(s));
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = omp_get_max_threads();
}

void BM_CountLagPairsSerial(benchmark::State& state) {
    const auto& s = sequence_of(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(serial::count_lag_pairs(s, 3));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

// Codes are computed once per sequence, as the covariance estimator does across lags.
void BM_CountLagPairsParallel(benchmark::State& state) {
    const auto& s = sequence_of(static_cast<std::size_t>(state.range(0)));
    const auto codes = pair_codes(s);
    for (auto _ : state) benchmark::DoNotOptimize(count_lag_pairs(codes, 3, Topology::circular));
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = omp_get_max_threads();
}

}  // namespace

BENCHMARK(BM_CountPairsSerial)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CountPairsParallel)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CountLagPairsSerial)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CountLagPairsParallel)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
