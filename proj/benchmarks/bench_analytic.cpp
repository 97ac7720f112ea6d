#include <benchmark/benchmark.h>

#include "uavnet/analytic.hpp"

using namespace uavnet;

static void BM_AssociationProbabilities(benchmark::State& state) {
    const NetworkConfig c = default_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(analytic::association_probabilities(c));
    }
}
BENCHMARK(BM_AssociationProbabilities);

static void BM_CoverageProbability(benchmark::State& state) {
    const NetworkConfig c = default_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            analytic::coverage_probability(Mode::Conventional, TierId::Macro,
                                           1.0, c));
    }
}
BENCHMARK(BM_CoverageProbability);

static void BM_SpectralEfficiency(benchmark::State& state) {
    const NetworkConfig c = default_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            analytic::spectral_efficiency(Mode::Split, TierId::Uav, c));
    }
}
BENCHMARK(BM_SpectralEfficiency);
