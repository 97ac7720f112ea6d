#include "uavnet/mobility.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "detail/grid.hpp"
#include "detail/parallel.hpp"
#include "detail/rng.hpp"
#include "uavnet/montecarlo.hpp"

namespace uavnet::mobility {

namespace {

using detail::Rng;
using detail::stream_seed;

constexpr std::uint64_t kTagBoundary = 0xb0bb1e5ULL;

double min_positive_intensity(const NetworkConfig& c) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& t : c.tiers) {
        if (t.intensity > 0.0) lo = std::min(lo, t.intensity);
    }
    return lo;
}

double total_intensity(const NetworkConfig& c) {
    double s = 0.0;
    for (const auto& t : c.tiers) s += t.intensity;
    return s;
}

struct ServingResolver {
    std::array<detail::PlanarGrid, 3> grids;
    std::array<double, 3> inv_weight{};
    std::array<double, 3> h2{};
    bool any = false;

    ServingResolver(const montecarlo::Deployment& d, const NetworkConfig& c) {
        for (int k = 0; k < 3; ++k) {
            inv_weight[k] =
                1.0 / std::pow(c.tiers[k].power, 2.0 / c.path_loss_exponent);
            h2[k] = c.tiers[k].height * c.tiers[k].height;
            std::vector<detail::Point> pts;
            pts.reserve(d.points[k].size());
            for (const auto& p : d.points[k]) pts.push_back({p.x, p.y});
            if (!pts.empty()) any = true;
            const double lam = c.tiers[k].intensity;
            const double cell =
                lam > 0.0
                    ? std::clamp(0.75 / std::sqrt(lam), 5.0, d.window_radius)
                    : d.window_radius;
            grids[k].build(pts, d.window_radius, cell);
        }
    }

    std::int64_t operator()(double x, double y) const {
        std::int64_t best = -1;
        double best_metric = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 3; ++k) {
            if (grids[k].empty()) continue;
            double r2 = 0.0;
            const int i = grids[k].nearest(x, y, &r2);
            const double m = (r2 + h2[k]) * inv_weight[k];
            if (best < 0 || m < best_metric) {
                best_metric = m;
                best = (static_cast<std::int64_t>(k) << 32) | i;
            }
        }
        return best;
    }
};

}  // namespace

double auto_chord_length(const NetworkConfig& c) {
    // Long enough for a few dozen expected crossings per chord at typical
    // boundary intensities (mu is of order 2 sqrt(total intensity)).
    const double lam = total_intensity(c);
    return std::clamp(8.0 / std::sqrt(lam), 1000.0, 50000.0);
}

BoundaryIntensities boundary_intensities(const NetworkConfig& c,
                                         const EstimationSpec& spec,
                                         std::uint64_t seed) {
    if (spec.trajectories <= 1 || spec.step <= 0.0) {
        throw SimulationError("boundary_intensities: bad estimation parameters");
    }
    const double length = spec.length > 0.0 ? spec.length : auto_chord_length(c);
    const double guard =
        spec.window > 0.0 ? spec.window : 5.0 / std::sqrt(min_positive_intensity(c));
    const double radius = length / 2.0 + guard;
    constexpr double kRefine = 0.01;

    using Matrix = std::array<std::array<double, 3>, 3>;
    const int trials = spec.trajectories;
    std::vector<Matrix> per_chord(trials, Matrix{});

    detail::for_each_chunk(trials, 1, [&](long, long b, long e) {
        for (long t = b; t < e; ++t) {
            const std::uint64_t chord_seed = stream_seed(seed, kTagBoundary, t);
            const montecarlo::Deployment dep =
                montecarlo::sample_deployment(c, radius, chord_seed);
            const ServingResolver serving(dep, c);
            if (!serving.any) continue;
            Rng rng(stream_seed(chord_seed, kTagBoundary, 1));
            const double theta = 2.0 * M_PI * rng.uniform();
            const double dx = std::cos(theta), dy = std::sin(theta);

            Matrix& counts = per_chord[t];
            double pos = -length / 2.0;
            std::int64_t prev = serving(pos * dx, pos * dy);
            const double pos_end = length / 2.0;
            while (pos < pos_end) {
                const double nxt = std::min(pos + spec.step, pos_end);
                const std::int64_t cur = serving(nxt * dx, nxt * dy);
                if (cur != prev) {
                    double lo = pos, hi = nxt;
                    std::int64_t lo_id = prev, hi_id = cur;
                    while (hi - lo > kRefine) {
                        const double mid = 0.5 * (lo + hi);
                        const std::int64_t mid_id = serving(mid * dx, mid * dy);
                        if (mid_id == lo_id) {
                            lo = mid;
                        } else {
                            hi = mid;
                            hi_id = mid_id;
                        }
                    }
                    const int a = static_cast<int>(lo_id >> 32);
                    const int b2 = static_cast<int>(hi_id >> 32);
                    counts[std::min(a, b2)][std::max(a, b2)] += 1.0;
                }
                prev = cur;
                pos = nxt;
            }
        }
    });

    // Cauchy-Crofton inversion per chord: mu_ij = (pi/2) crossings / length.
    BoundaryIntensities out;
    const double scale = M_PI / (2.0 * length);
    double tot_sum = 0.0, tot_sumsq = 0.0;
    Matrix sum{}, sumsq{};
    for (const Matrix& m : per_chord) {
        double chord_total = 0.0;
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                const double est = m[i][j] * scale;
                sum[i][j] += est;
                sumsq[i][j] += est * est;
                chord_total += est;
            }
        }
        tot_sum += chord_total;
        tot_sumsq += chord_total * chord_total;
    }
    const double n = trials;
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            const double mean = sum[i][j] / n;
            const double var =
                std::max(0.0, (sumsq[i][j] - n * mean * mean) / (n - 1.0));
            out.mu[i][j] = out.mu[j][i] = mean;
            out.standard_error[i][j] = out.standard_error[j][i] =
                std::sqrt(var / n);
        }
    }
    out.total = tot_sum / n;
    const double tvar =
        std::max(0.0, (tot_sumsq - n * out.total * out.total) / (n - 1.0));
    out.total_standard_error = std::sqrt(tvar / n);

    if (out.total > 0.0 &&
        out.total_standard_error > spec.max_relative_error * out.total) {
        throw SimulationError(
            "boundary_intensities: insufficient samples (relative standard "
            "error " +
            std::to_string(out.total_standard_error / out.total) + ")");
    }
    return out;
}

HandoverStats handover_rates(const BoundaryIntensities& mu, double v) {
    if (v < 0.0) {
        throw SimulationError("handover_rates: velocity must be >= 0");
    }
    HandoverStats s;
    s.velocity = v;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double coef = (i == j) ? 2.0 / M_PI : 1.0 / M_PI;
            s.ho_rate[i][j] = coef * mu.mu[i][j] * v;
            s.total_rate += s.ho_rate[i][j];
        }
    }
    return s;
}

double handover_cost(const HandoverStats& stats, const NetworkConfig& c,
                     Mode mode, VvControl control) {
    double all = 0.0;
    for (const auto& row : stats.ho_rate) {
        for (double r : row) all += r;
    }
    if (mode == Mode::Conventional) {
        return c.ho_delay_control * all;
    }
    if (control == VvControl::UavVoronoi) {
        // Control attaches to the strongest UAV, whose cells form a plain
        // Voronoi tessellation with boundary intensity 2 sqrt(lambda_v);
        // every data-plane crossing then pays the light delay.
        const double vv_control = (2.0 / M_PI) * 2.0 *
                                  std::sqrt(c.tier(TierId::Uav).intensity) *
                                  stats.velocity;
        return c.ho_delay_control * vv_control + c.ho_delay_data * all;
    }
    return c.ho_delay_control * stats.ho_rate[2][2] +
           c.ho_delay_data * (all - stats.ho_rate[2][2]);
}

ThroughputReport average_throughput(Mode mode, const NetworkConfig& c,
                                    double velocity,
                                    const BoundaryIntensities& mu,
                                    const AssociationResult& assoc,
                                    const RateResult& rates,
                                    VvControl control) {
    ThroughputReport r;
    r.mode = mode;
    r.velocity = velocity;
    r.application_rate = rates.application_rate;
    r.spectral_efficiency = rates.spectral_efficiency;
    r.loads = analytic::mean_users(c, assoc);

    HandoverStats stats = handover_rates(mu, velocity);
    stats.cost_conventional = handover_cost(stats, c, Mode::Conventional, control);
    stats.cost_split = handover_cost(stats, c, Mode::Split, control);
    r.handover_cost =
        mode == Mode::Conventional ? stats.cost_conventional : stats.cost_split;
    r.ho_total_rate = stats.total_rate;
    r.ho_total_rate_stderr =
        (2.0 / M_PI) * velocity * mu.total_standard_error;

    // First-order error propagation: the cost is linear in the boundary
    // intensities with the same coefficients for every entry of one class.
    {
        double se2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                const double rate_coef = (2.0 / M_PI) * velocity;
                double delay;
                if (mode == Mode::Conventional) {
                    delay = c.ho_delay_control;
                } else if (i == 2 && j == 2) {
                    // Under the Voronoi control model the uav-uav control
                    // term is closed form; only the data delay remains
                    // exposed to the estimate.
                    delay = control == VvControl::UavVoronoi
                                ? c.ho_delay_data
                                : c.ho_delay_control;
                } else {
                    delay = c.ho_delay_data;
                }
                const double d = delay * rate_coef * mu.standard_error[i][j];
                se2 += d * d;
            }
        }
        r.handover_cost_stderr = std::sqrt(se2);
    }

    double penalty = 1.0 - r.handover_cost;
    if (penalty < 0.0) {
        penalty = 0.0;
        r.cost_saturated = true;
    }

    const std::array<double, 3> a{assoc.a_m, assoc.a_s, assoc.a_v};
    const std::array<double, 3> n{r.loads.n_m, r.loads.n_s, r.loads.n_v};
    double at = 0.0, atu = 0.0;
    for (int k = 0; k < 3; ++k) {
        at += a[k] * rates.application_rate[k];
        atu += a[k] / n[k] * rates.application_rate[k];
    }
    r.average_throughput = at * penalty;
    r.average_throughput_loaded = atu * penalty;
    return r;
}

ThroughputReport average_throughput(Mode mode, const NetworkConfig& c,
                                    double velocity,
                                    const BoundaryIntensities& mu) {
    const AssociationResult assoc = analytic::association_probabilities(c);
    const RateResult rates = analytic::application_rates(mode, c);
    return average_throughput(mode, c, velocity, mu, assoc, rates);
}

const BoundaryIntensities& BoundaryCache::get_or_estimate(
    const NetworkConfig& config, const EstimationSpec& spec,
    std::uint64_t seed) {
    auto mix = [](std::uint64_t h, std::uint64_t v) {
        return detail::splitmix64(h ^ detail::splitmix64(v));
    };
    std::uint64_t key = geometry_fingerprint(config);
    key = mix(key, static_cast<std::uint64_t>(spec.trajectories));
    key = mix(key, std::bit_cast<std::uint64_t>(spec.length));
    key = mix(key, std::bit_cast<std::uint64_t>(spec.window));
    key = mix(key, std::bit_cast<std::uint64_t>(spec.step));
    key = mix(key, seed);

    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = map_.find(key);
        if (it != map_.end()) return *it->second;
    }
    // Estimate outside the lock; duplicate concurrent misses are resolved by
    // keeping the first insertion.
    auto fresh = std::make_unique<BoundaryIntensities>(
        boundary_intensities(config, spec, seed));
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = map_.emplace(key, std::move(fresh));
    if (inserted) ++estimations_;
    return *it->second;
}

long BoundaryCache::estimation_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return estimations_;
}

void BoundaryCache::clear() {
    std::lock_guard<std::mutex> lock(mutex_);
    map_.clear();
    estimations_ = 0;
}

}  // namespace uavnet::mobility
