#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "uavnet/analytic.hpp"
#include "uavnet/model.hpp"

namespace uavnet::testkit {

/// The reference three-tier deployment used across the suite.
inline NetworkConfig reference_config() { return default_config(); }

/// Closed form of the coverage kernel at path-loss exponent 4:
/// 2F1(1, 1/2; 3/2; -t) = arctan(sqrt(t)) / sqrt(t).
inline double hyp_eta4_closed_form(double t) {
    if (t == 0.0) return 1.0;
    const double r = std::sqrt(t);
    return std::atan(r) / r;
}

/// Draws a random config with ordered heights and valid ranges:
/// intensities in [0.1, 50] per km^2, powers in [20, 50] dBm, eta in
/// (2.5, 6].
inline NetworkConfig random_valid_config(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto pick = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };

    NetworkConfig c = reference_config();
    for (;;) {
        const double hs = pick(2.0, 30.0);
        const double hm = pick(hs + 1.0, 60.0);
        const double hv = pick(hm + 1.0, 120.0);
        c.tier(TierId::Macro) = {pick(0.1, 50.0) * 1e-6,
                                 dbm_to_watts(pick(20.0, 50.0)), hm};
        c.tier(TierId::Small) = {pick(0.1, 50.0) * 1e-6,
                                 dbm_to_watts(pick(20.0, 50.0)), hs};
        c.tier(TierId::Uav) = {pick(0.1, 50.0) * 1e-6,
                               dbm_to_watts(pick(20.0, 50.0)), hv};
        c.path_loss_exponent = pick(2.5001, 6.0);
        try {
            validate(c);
            return c;
        } catch (const ConfigError&) {
            continue;  // heights drew an invalid combination; retry
        }
    }
}

/// Two-sided Kolmogorov-Smirnov statistic of `samples` against the given
/// CDF. `samples` need not be sorted.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, const Cdf& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, (i + 1) / n - f);
        d = std::max(d, f - i / n);
    }
    return d;
}

/// Asymptotic KS critical value at significance alpha = 0.01.
inline double ks_critical_1pct(std::size_t n) {
    return 1.628 / std::sqrt(static_cast<double>(n));
}

}  // namespace uavnet::testkit
