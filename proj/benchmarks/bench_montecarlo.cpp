#include <benchmark/benchmark.h>

#include "uavnet/mobility.hpp"
#include "uavnet/montecarlo.hpp"

using namespace uavnet;

static void BM_DeploymentAndAssociation(benchmark::State& state) {
    const NetworkConfig c = default_config();
    std::uint64_t seed = 0;
    for (auto _ : state) {
        const auto d = montecarlo::sample_deployment(c, 2000.0, ++seed);
        benchmark::DoNotOptimize(montecarlo::associate(d, c));
    }
}
BENCHMARK(BM_DeploymentAndAssociation);

static void BM_CoverageTrials1k(benchmark::State& state) {
    const NetworkConfig c = default_config();
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(montecarlo::estimate_coverage(
            Mode::Conventional, 1.0, c, 1000, ++seed));
    }
}
BENCHMARK(BM_CoverageTrials1k);

static void BM_BoundaryChords32(benchmark::State& state) {
    const NetworkConfig c = default_config();
    mobility::EstimationSpec spec;
    spec.trajectories = 32;
    spec.length = 2000.0;
    spec.max_relative_error = 1.0;  // benchmark only, no precision gate
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            mobility::boundary_intensities(c, spec, ++seed));
    }
}
BENCHMARK(BM_BoundaryChords32);
