#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace uavnet::detail {

// splitmix64: the stream-splitting rule. Every Monte Carlo trial draws its
// own generator seed as splitmix64(master ^ purpose ^ index), so parallel
// and serial executions of the same request produce identical results.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t purpose,
                                 std::uint64_t index) {
    return splitmix64(master ^ splitmix64(purpose) ^ splitmix64(index * 2 + 1));
}

// Portable draws on top of the standard engine. std:: distributions are
// implementation-defined, so the samplers are spelled out here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // in [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential() { return -std::log1p(-uniform()); }

    // Knuth's product method; fine for the means used here (< ~1e4).
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        if (limit > 0.0) {
            int n = 0;
            double p = uniform();
            while (p > limit) {
                p *= uniform();
                ++n;
            }
            return n;
        }
        // Mean too large for exp(-mean): split the draw.
        return poisson(mean * 0.5) + poisson(mean * 0.5);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace uavnet::detail
