#include <benchmark/benchmark.h>

#include "ncho/confluence.hpp"
#include "ncho/connection.hpp"
#include "ncho/truncation.hpp"

using namespace ncho;

static void BM_TruncatedLowest(benchmark::State& state) {
    const auto op = build_truncated(eta_shifted_ncho(2.0, 3.0, 0.1, 1.5), static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(lowest_eigenpairs(op, 8));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TruncatedLowest)->RangeMultiplier(2)->Range(64, 2048)->Complexity();

static void BM_SpectrumTruncated(benchmark::State& state) {
    const auto pr = eta_shifted_ncho(2.0, 3.0, 0.1, 1.5);
    for (auto _ : state) benchmark::DoNotOptimize(spectrum_truncated(pr, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SpectrumTruncated)->Arg(5)->Arg(20);

static void BM_ConnectionEvaluate(benchmark::State& state) {
    const ConnectionDeterminant T(eta_shifted_ncho(2.0, 3.0, 0.1, 1.5));
    double lam = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(T(lam));
        lam += 1e-3;
    }
}
BENCHMARK(BM_ConnectionEvaluate);

static void BM_SpectrumConnection(benchmark::State& state) {
    const auto pr = eta_shifted_ncho(2.0, 3.0, 0.1, 1.5);
    for (auto _ : state) benchmark::DoNotOptimize(spectrum_connection(pr, 5));
}
BENCHMARK(BM_SpectrumConnection)->Unit(benchmark::kMillisecond);

static void BM_ConfluenceSweep(benchmark::State& state) {
    RabiParameters r;
    r.g_coupling = 0.3;
    r.Delta = 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(confluence_sweep(r, {40.0, 160.0, 640.0}, 5));
}
BENCHMARK(BM_ConfluenceSweep)->Unit(benchmark::kMillisecond);
