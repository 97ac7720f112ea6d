#include "uavnet/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "detail/grid.hpp"
#include "detail/parallel.hpp"
#include "detail/rng.hpp"

namespace uavnet::montecarlo {

namespace {

using detail::Rng;
using detail::stream_seed;

constexpr std::uint64_t kTagDeploy = 0xde9107ULL;
constexpr std::uint64_t kTagCoverage = 0xc0ffeeULL;
constexpr std::uint64_t kTagLaplace = 0x7a97aceULL;
constexpr std::uint64_t kTagHandover = 0xb0da9eULL;
constexpr std::uint64_t kTagConditional = 0xc0da11ULL;

inline int idx(TierId t) { return static_cast<int>(t); }

struct BiasedMetric {
    // Association metric (r^2 + h^2) / P^(2/eta): the max-RSS winner is the
    // metric minimiser.
    std::array<double, 3> inv_weight{};
    std::array<double, 3> h2{};

    explicit BiasedMetric(const NetworkConfig& c) {
        for (int k = 0; k < 3; ++k) {
            inv_weight[k] =
                1.0 / std::pow(c.tiers[k].power, 2.0 / c.path_loss_exponent);
            h2[k] = c.tiers[k].height * c.tiers[k].height;
        }
    }

    double operator()(int tier, double r2) const {
        return (r2 + h2[tier]) * inv_weight[tier];
    }
};

double min_positive_intensity(const NetworkConfig& c) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& t : c.tiers) {
        if (t.intensity > 0.0) lo = std::min(lo, t.intensity);
    }
    return lo;
}

SimEstimate proportion_estimate(double hits, long n) {
    SimEstimate e;
    e.samples = n;
    if (n <= 0) return e;
    const double p = hits / static_cast<double>(n);
    e.value = p;
    if (n > 1) {
        e.standard_error = std::sqrt(std::max(0.0, p * (1.0 - p)) / (n - 1.0));
    }
    return e;
}

SimEstimate mean_estimate(double sum, double sumsq, long n) {
    SimEstimate e;
    e.samples = n;
    if (n <= 0) return e;
    const double mean = sum / n;
    e.value = mean;
    if (n > 1) {
        const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
        e.standard_error = std::sqrt(var / n);
    }
    return e;
}

}  // namespace

Deployment sample_deployment(const NetworkConfig& c, double window_radius,
                             std::uint64_t seed) {
    if (!(window_radius > 0.0)) {
        throw SimulationError("sample_deployment: window radius must be positive");
    }
    Deployment d;
    d.window_radius = window_radius;
    d.rng_seed = seed;
    Rng rng(detail::splitmix64(seed ^ kTagDeploy));
    const double area = M_PI * window_radius * window_radius;
    for (int k = 0; k < 3; ++k) {
        const int n = rng.poisson(c.tiers[k].intensity * area);
        d.points[k].reserve(n);
        for (int i = 0; i < n; ++i) {
            const double r = window_radius * std::sqrt(rng.uniform());
            const double th = 2.0 * M_PI * rng.uniform();
            d.points[k].push_back({r * std::cos(th), r * std::sin(th)});
        }
    }
    return d;
}

AssociationDraw associate(const Deployment& d, const NetworkConfig& c) {
    const BiasedMetric metric(c);
    AssociationDraw best;
    double best_metric = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int k = 0; k < 3; ++k) {
        int arg = -1;
        double r2_best = std::numeric_limits<double>::infinity();
        const auto& pts = d.points[k];
        for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
            const double r2 = pts[i].x * pts[i].x + pts[i].y * pts[i].y;
            if (r2 < r2_best) {
                r2_best = r2;
                arg = i;
            }
        }
        if (arg < 0) continue;
        const double m = metric(k, r2_best);
        if (!found || m < best_metric) {  // strict: ties keep the lower tier
            found = true;
            best_metric = m;
            best.tier = static_cast<TierId>(k);
            best.index = arg;
            best.horizontal = std::sqrt(r2_best);
            best.distance3d = std::sqrt(r2_best + metric.h2[k]);
        }
    }
    if (!found) {
        throw SimulationError("associate: deployment holds no base stations");
    }
    return best;
}

double default_window_radius(const NetworkConfig& c) {
    const double eta = c.path_loss_exponent;
    // Interference tail: mean interference beyond R scales as R^(2-eta), so
    // R = h * 1000^(1/(eta-2)) keeps the truncated part under ~0.1%.
    double h_max = 0.0;
    for (const auto& t : c.tiers) h_max = std::max(h_max, t.height);
    const double interference = h_max * std::pow(1000.0, 1.0 / (eta - 2.0));
    // Serving-station tail: the nearest point of the sparsest tier lies
    // within R except with probability exp(-40).
    const double lam_min = min_positive_intensity(c);
    const double serving = std::sqrt(40.0 / (M_PI * lam_min));
    return std::clamp(std::max(interference, serving), 1500.0, 50000.0);
}

AssociationEstimate estimate_association(const NetworkConfig& c, long samples,
                                         std::uint64_t seed) {
    const double radius = std::sqrt(40.0 / (M_PI * min_positive_intensity(c)));
    constexpr long kChunk = 1024;
    const long chunks = (samples + kChunk - 1) / kChunk;
    std::vector<std::array<long, 3>> wins(chunks, {0, 0, 0});

    detail::for_each_chunk(samples, kChunk, [&](long ci, long b, long e) {
        auto& w = wins[ci];
        for (long i = b; i < e; ++i) {
            const Deployment d =
                sample_deployment(c, radius, stream_seed(seed, kTagDeploy, i));
            w[idx(associate(d, c).tier)]++;
        }
    });

    std::array<long, 3> total{0, 0, 0};
    for (const auto& w : wins) {
        for (int k = 0; k < 3; ++k) total[k] += w[k];
    }
    AssociationEstimate est;
    for (int k = 0; k < 3; ++k) {
        est.probability[k] = proportion_estimate(static_cast<double>(total[k]),
                                                 samples);
    }
    return est;
}

std::array<std::vector<double>, 3> draw_serving_distances(
    const NetworkConfig& c, long samples, std::uint64_t seed) {
    const double radius = std::sqrt(40.0 / (M_PI * min_positive_intensity(c)));
    constexpr long kChunk = 1024;
    const long chunks = (samples + kChunk - 1) / kChunk;
    std::vector<std::array<std::vector<double>, 3>> parts(chunks);

    detail::for_each_chunk(samples, kChunk, [&](long ci, long b, long e) {
        for (long i = b; i < e; ++i) {
            const Deployment d =
                sample_deployment(c, radius, stream_seed(seed, kTagDeploy, i));
            const AssociationDraw a = associate(d, c);
            parts[ci][idx(a.tier)].push_back(a.horizontal);
        }
    });

    std::array<std::vector<double>, 3> out;
    for (const auto& p : parts) {
        for (int k = 0; k < 3; ++k) {
            out[k].insert(out[k].end(), p[k].begin(), p[k].end());
        }
    }
    return out;
}

namespace {

struct InterfererMask {
    std::array<bool, 3> in{};
};

InterfererMask interferer_mask(Mode mode, TierId serving) {
    InterfererMask m;
    if (mode == Mode::Conventional) {
        m.in = {true, true, true};
    } else if (serving == TierId::Uav) {
        m.in = {false, false, true};
    } else {
        m.in = {true, true, false};
    }
    return m;
}

}  // namespace

CoverageEstimate estimate_coverage(Mode mode, double threshold,
                                   const NetworkConfig& c, long samples,
                                   std::uint64_t seed,
                                   std::vector<TrialRecord>* records) {
    const double radius = default_window_radius(c);
    const double eta = c.path_loss_exponent;
    constexpr long kChunk = 1024;
    const long chunks = (samples + kChunk - 1) / kChunk;

    struct Tally {
        std::array<long, 3> hits{0, 0, 0};
        std::array<long, 3> count{0, 0, 0};
        std::vector<TrialRecord> recs;
    };
    std::vector<Tally> tallies(chunks);

    detail::for_each_chunk(samples, kChunk, [&](long ci, long b, long e) {
        Tally& t = tallies[ci];
        if (records) t.recs.reserve(e - b);
        for (long i = b; i < e; ++i) {
            const std::uint64_t trial_seed = stream_seed(seed, kTagCoverage, i);
            const Deployment d = sample_deployment(c, radius, trial_seed);
            const AssociationDraw a = associate(d, c);
            Rng fade(stream_seed(trial_seed, kTagCoverage, 1));

            const int k = idx(a.tier);
            const double signal = c.tiers[k].power * fade.exponential() *
                                  std::pow(a.distance3d, -eta);
            const InterfererMask mask = interferer_mask(mode, a.tier);
            double interference = 0.0;
            for (int j = 0; j < 3; ++j) {
                if (!mask.in[j]) continue;
                const auto& pts = d.points[j];
                const double h2 = c.tiers[j].height * c.tiers[j].height;
                for (int p = 0; p < static_cast<int>(pts.size()); ++p) {
                    if (j == k && p == a.index) continue;
                    const double u2 = pts[p].x * pts[p].x + pts[p].y * pts[p].y + h2;
                    interference += c.tiers[j].power * fade.exponential() *
                                    std::pow(u2, -eta / 2.0);
                }
            }
            // Compare without dividing: also covers the zero-denominator
            // case (no interferers, sigma^2 = 0) where SINR is infinite.
            const double denom = interference + c.noise_power;
            const bool covered = signal > threshold * denom;
            t.hits[k] += covered;
            t.count[k] += 1;
            if (records) {
                TrialRecord r;
                r.seed = trial_seed;
                r.tier = a.tier;
                r.distance3d = a.distance3d;
                r.sinr = denom > 0.0 ? signal / denom
                                     : std::numeric_limits<double>::infinity();
                t.recs.push_back(r);
            }
        }
    });

    std::array<long, 3> hits{0, 0, 0}, count{0, 0, 0};
    for (const auto& t : tallies) {
        for (int k = 0; k < 3; ++k) {
            hits[k] += t.hits[k];
            count[k] += t.count[k];
        }
        if (records) {
            records->insert(records->end(), t.recs.begin(), t.recs.end());
        }
    }

    CoverageEstimate est;
    long all_hits = 0;
    for (int k = 0; k < 3; ++k) {
        est.per_tier[k] =
            proportion_estimate(static_cast<double>(hits[k]), count[k]);
        all_hits += hits[k];
    }
    est.overall = proportion_estimate(static_cast<double>(all_hits), samples);
    return est;
}

namespace {

// Interferers of tier j for a user served by tier k at 3-D distance z are a
// PPP outside the horizontal radius where the biased signal would have beaten
// the serving one, never closer than directly overhead.
double conditional_exclusion_radius(const NetworkConfig& c, int serving,
                                    int interferer, double z) {
    const double d = std::pow(c.tiers[interferer].power / c.tiers[serving].power,
                              1.0 / c.path_loss_exponent) *
                     z;
    const double h2 =
        c.tiers[interferer].height * c.tiers[interferer].height;
    return std::sqrt(std::max(0.0, d * d - h2));
}

double sample_conditional_interference(Rng& rng, const NetworkConfig& c,
                                       Mode mode, int serving, double z,
                                       double radius) {
    const double eta = c.path_loss_exponent;
    const InterfererMask mask = interferer_mask(mode, static_cast<TierId>(serving));
    double interference = 0.0;
    for (int j = 0; j < 3; ++j) {
        if (!mask.in[j]) continue;
        const double rmin = conditional_exclusion_radius(c, serving, j, z);
        if (rmin >= radius) continue;
        const double area = M_PI * (radius * radius - rmin * rmin);
        const int n = rng.poisson(c.tiers[j].intensity * area);
        const double h2 = c.tiers[j].height * c.tiers[j].height;
        for (int i = 0; i < n; ++i) {
            const double r2 =
                rmin * rmin + (radius * radius - rmin * rmin) * rng.uniform();
            interference += c.tiers[j].power * rng.exponential() *
                            std::pow(r2 + h2, -eta / 2.0);
        }
    }
    return interference;
}

}  // namespace

SimEstimate estimate_conditional_coverage(Mode mode, TierId tier,
                                          double threshold, double horizontal,
                                          const NetworkConfig& c, long samples,
                                          std::uint64_t seed) {
    const int k = idx(tier);
    const double z = std::hypot(horizontal, c.tiers[k].height);
    const double radius = default_window_radius(c);
    const double eta = c.path_loss_exponent;
    constexpr long kChunk = 2048;
    const long chunks = (samples + kChunk - 1) / kChunk;
    std::vector<long> hits(chunks, 0);

    detail::for_each_chunk(samples, kChunk, [&](long ci, long b, long e) {
        long h = 0;
        for (long i = b; i < e; ++i) {
            Rng rng(stream_seed(seed, kTagConditional, i));
            const double signal =
                c.tiers[k].power * rng.exponential() * std::pow(z, -eta);
            const double interference =
                sample_conditional_interference(rng, c, mode, k, z, radius);
            h += signal > threshold * (interference + c.noise_power);
        }
        hits[ci] = h;
    });

    long total = 0;
    for (long h : hits) total += h;
    return proportion_estimate(static_cast<double>(total), samples);
}

SimEstimate estimate_laplace(Mode mode, TierId tier, double z, double s,
                             const NetworkConfig& c, long samples,
                             std::uint64_t seed) {
    if (z < c.tier(tier).height) {
        throw SimulationError(
            "estimate_laplace: serving distance below antenna height");
    }
    const double radius = default_window_radius(c);
    constexpr long kChunk = 2048;
    const long chunks = (samples + kChunk - 1) / kChunk;
    struct Acc {
        double sum = 0.0, sumsq = 0.0;
    };
    std::vector<Acc> accs(chunks);

    detail::for_each_chunk(samples, kChunk, [&](long ci, long b, long e) {
        Acc a;
        for (long i = b; i < e; ++i) {
            Rng rng(stream_seed(seed, kTagLaplace, i));
            const double interference = sample_conditional_interference(
                rng, c, mode, idx(tier), z, radius);
            const double v = std::exp(-s * interference);
            a.sum += v;
            a.sumsq += v * v;
        }
        accs[ci] = a;
    });

    double sum = 0.0, sumsq = 0.0;
    for (const auto& a : accs) {
        sum += a.sum;
        sumsq += a.sumsq;
    }
    return mean_estimate(sum, sumsq, samples);
}

namespace {

struct WalkContext {
    std::array<detail::PlanarGrid, 3> grids;
    BiasedMetric metric;
    bool any = false;

    WalkContext(const Deployment& d, const NetworkConfig& c) : metric(c) {
        for (int k = 0; k < 3; ++k) {
            std::vector<detail::Point> pts;
            pts.reserve(d.points[k].size());
            for (const auto& p : d.points[k]) pts.push_back({p.x, p.y});
            if (!pts.empty()) any = true;
            const double lam = c.tiers[k].intensity;
            const double cell =
                lam > 0.0 ? std::clamp(0.75 / std::sqrt(lam), 5.0,
                                       d.window_radius)
                          : d.window_radius;
            grids[k].build(pts, d.window_radius, cell);
        }
    }

    // Serving station id packed as tier * 2^32 + index.
    std::int64_t serving(double x, double y) const {
        std::int64_t best_id = -1;
        double best_metric = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 3; ++k) {
            if (grids[k].empty()) continue;
            double r2 = 0.0;
            const int i = grids[k].nearest(x, y, &r2);
            const double m = metric(k, r2);
            if (best_id < 0 || m < best_metric) {
                best_metric = m;
                best_id = (static_cast<std::int64_t>(k) << 32) | i;
            }
        }
        return best_id;
    }
};

}  // namespace

HandoverSimulation simulate_handovers(const NetworkConfig& c, double v,
                                      double trajectory_length, int trials,
                                      std::uint64_t seed, double step) {
    HandoverSimulation out;
    if (v == 0.0 || trials <= 0) return out;
    if (!(trajectory_length > 0.0) || !(step > 0.0)) {
        throw SimulationError("simulate_handovers: bad trajectory parameters");
    }

    const double guard = 5.0 / std::sqrt(min_positive_intensity(c));
    const double radius = trajectory_length / 2.0 + guard;
    const double duration = trajectory_length / v;
    constexpr double kRefine = 0.01;  // crossing bracket width, metres

    using Matrix = std::array<std::array<double, 3>, 3>;
    std::vector<Matrix> per_trial(trials, Matrix{});

    detail::for_each_chunk(trials, 1, [&](long ci, long b, long e) {
        for (long t = b; t < e; ++t) {
            const std::uint64_t trial_seed = stream_seed(seed, kTagHandover, t);
            const Deployment dep = sample_deployment(c, radius, trial_seed);
            const WalkContext ctx(dep, c);
            if (!ctx.any) continue;
            Rng rng(stream_seed(trial_seed, kTagHandover, 1));
            const double theta = 2.0 * M_PI * rng.uniform();
            const double dx = std::cos(theta), dy = std::sin(theta);

            Matrix& counts = per_trial[t];
            const double t0 = -trajectory_length / 2.0;
            std::int64_t prev = ctx.serving(t0 * dx, t0 * dy);
            double pos = t0;
            const double t_end = trajectory_length / 2.0;
            while (pos < t_end) {
                const double nxt = std::min(pos + step, t_end);
                const std::int64_t cur = ctx.serving(nxt * dx, nxt * dy);
                if (cur != prev) {
                    // Bisect to centimetre resolution, then classify the
                    // crossing by the tiers on each side.
                    double lo = pos, hi = nxt;
                    std::int64_t lo_id = prev, hi_id = cur;
                    while (hi - lo > kRefine) {
                        const double mid = 0.5 * (lo + hi);
                        const std::int64_t mid_id = ctx.serving(mid * dx, mid * dy);
                        if (mid_id == lo_id) {
                            lo = mid;
                        } else {
                            hi = mid;
                            hi_id = mid_id;
                        }
                    }
                    counts[lo_id >> 32][hi_id >> 32] += 1.0;
                }
                prev = cur;
                pos = nxt;
            }
            for (auto& row : counts) {
                for (auto& cell : row) cell /= duration;
            }
        }
    });

    // Symmetrise each trial, then average; the error is the spread across
    // trials.
    double tot_sum = 0.0, tot_sumsq = 0.0;
    Matrix sum{}, sumsq{};
    for (const Matrix& m : per_trial) {
        double trial_total = 0.0;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const double s = 0.5 * (m[i][j] + m[j][i]);
                sum[i][j] += s;
                sumsq[i][j] += s * s;
                trial_total += m[i][j];
            }
        }
        tot_sum += trial_total;
        tot_sumsq += trial_total * trial_total;
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const SimEstimate e = mean_estimate(sum[i][j], sumsq[i][j], trials);
            out.rate[i][j] = e.value;
            out.standard_error[i][j] = e.standard_error;
        }
    }
    const SimEstimate te = mean_estimate(tot_sum, tot_sumsq, trials);
    out.total_rate = te.value;
    out.total_standard_error = te.standard_error;
    return out;
}

void write_dump(std::ostream& out, const std::vector<TrialRecord>& records) {
    out << "seed\ttier\tdistance_m\tsinr\n";
    char buf[64];
    for (const auto& r : records) {
        out << r.seed << '\t' << tier_name(r.tier) << '\t';
        std::snprintf(buf, sizeof(buf), "%.9g", r.distance3d);
        out << buf << '\t';
        std::snprintf(buf, sizeof(buf), "%.9g", r.sinr);
        out << buf << '\n';
    }
}

}  // namespace uavnet::montecarlo
