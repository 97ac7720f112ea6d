#include <benchmark/benchmark.h>

#include <cmath>

#include "uavnet/specfun.hpp"

using namespace uavnet;

static void BM_Hyp2F1SmallArgument(benchmark::State& state) {
    double t = 0.0;
    for (auto _ : state) {
        t += 0.001;
        if (t > 3.9) t = 0.001;
        benchmark::DoNotOptimize(hyp2f1_coverage(4.0, t));
    }
}
BENCHMARK(BM_Hyp2F1SmallArgument);

static void BM_Hyp2F1LargeArgument(benchmark::State& state) {
    double t = 10.0;
    for (auto _ : state) {
        t *= 1.3;
        if (t > 1e4) t = 10.0;
        benchmark::DoNotOptimize(hyp2f1_coverage(3.7, t));
    }
}
BENCHMARK(BM_Hyp2F1LargeArgument);

static void BM_IntegrateSemiInfinite(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(
            [](double x) { return std::exp(-x * x / 2.0); }, 0.0,
            kInfiniteLimit));
    }
}
BENCHMARK(BM_IntegrateSemiInfinite);
