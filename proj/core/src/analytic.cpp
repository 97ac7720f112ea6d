#include "uavnet/analytic.hpp"

#include <algorithm>
#include <cmath>

namespace uavnet::analytic {

namespace {

constexpr int kNumTiers = 3;

inline int idx(TierId t) { return static_cast<int>(t); }

struct TierWeights {
    // w[k] = P_k^(2/eta); ratio(j,k) = w[j]/w[k] is the biased-distance
    // weight of tier j relative to tier k.
    std::array<double, 3> w{};
    double eta;
};

TierWeights weights(const NetworkConfig& c) {
    TierWeights tw;
    tw.eta = c.path_loss_exponent;
    for (int k = 0; k < kNumTiers; ++k) {
        tw.w[k] = std::pow(c.tiers[k].power, 2.0 / tw.eta);
    }
    return tw;
}

}  // namespace

SegmentTable segment_table(TierId tier, const NetworkConfig& c) {
    const TierWeights tw = weights(c);
    const int k = idx(tier);
    const double hk2 = c.tiers[k].height * c.tiers[k].height;

    // Competing tier j can beat the serving candidate only once the serving
    // 3-D distance exceeds h_j (P_k/P_j)^(1/eta); below that the j-tier
    // survival factor is identically one. In horizontal distance the switch
    // sits at sqrt(h_j^2 (P_k/P_j)^(2/eta) - h_k^2), clamped to zero when
    // the radicand is negative.
    struct Switch {
        double x;
        int j;
    };
    std::array<Switch, 2> sw;
    int n = 0;
    for (int j = 0; j < kNumTiers; ++j) {
        if (j == k) continue;
        const double hj2 = c.tiers[j].height * c.tiers[j].height;
        const double rad = hj2 * tw.w[k] / tw.w[j] - hk2;
        sw[n++] = {std::sqrt(std::max(0.0, rad)), j};
    }
    std::sort(sw.begin(), sw.end(),
              [](const Switch& a, const Switch& b) { return a.x < b.x; });

    std::vector<double> edges{0.0};
    for (const auto& s : sw) {
        if (s.x > edges.back()) edges.push_back(s.x);
    }
    edges.push_back(std::numeric_limits<double>::infinity());

    SegmentTable table;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        DistanceSegment seg;
        seg.x0 = edges[e];
        seg.x1 = edges[e + 1];
        seg.a = c.tiers[k].intensity;
        seg.c = 0.0;
        for (const auto& s : sw) {
            if (s.x <= seg.x0) {
                const double ratio = tw.w[s.j] / tw.w[k];
                const double hj2 = c.tiers[s.j].height * c.tiers[s.j].height;
                seg.a += c.tiers[s.j].intensity * ratio;
                seg.c += c.tiers[s.j].intensity * (ratio * hk2 - hj2);
                ++seg.actives;
            }
        }
        // Branch mass in closed form. The start exponent u0 is the log of a
        // product of survival probabilities, hence never positive: safe to
        // exponentiate directly.
        const double u0 = -M_PI * (seg.a * seg.x0 * seg.x0 + seg.c);
        const double lam_over_a = c.tiers[k].intensity / seg.a;
        if (std::isinf(seg.x1)) {
            seg.mass = lam_over_a * std::exp(u0);
        } else {
            const double u1 = -M_PI * (seg.a * seg.x1 * seg.x1 + seg.c);
            seg.mass = lam_over_a * std::exp(u0) * (-std::expm1(u1 - u0));
        }
        table.segments.push_back(seg);
        table.total += seg.mass;
    }
    return table;
}

AssociationResult association_probabilities(const NetworkConfig& c) {
    AssociationResult r;

    const SegmentTable m = segment_table(TierId::Macro, c);
    r.a_m = m.total;
    r.a_m2 = m.segments.back().mass;
    r.a_m1 = 0.0;
    for (std::size_t i = 0; i + 1 < m.segments.size(); ++i) {
        r.a_m1 += m.segments[i].mass;
    }

    const SegmentTable s = segment_table(TierId::Small, c);
    r.a_s = s.total;
    for (const auto& seg : s.segments) {
        if (seg.actives == 0) {
            r.a_s1 += seg.mass;
        } else if (seg.actives == 1) {
            r.a_s2 += seg.mass;
        } else {
            r.a_s3 += seg.mass;
        }
    }

    r.a_v = segment_table(TierId::Uav, c).total;
    return r;
}

DistanceBreakpoints breakpoints(const NetworkConfig& c) {
    const TierWeights tw = weights(c);
    auto clamp_sqrt = [](double rad) { return std::sqrt(std::max(0.0, rad)); };
    const auto& t = c.tiers;
    const double hm2 = t[0].height * t[0].height;
    const double hs2 = t[1].height * t[1].height;
    const double hv2 = t[2].height * t[2].height;

    DistanceBreakpoints b;
    b.l_m = clamp_sqrt(hv2 * tw.w[0] / tw.w[2] - hm2);
    b.l_s1 = clamp_sqrt(hm2 * tw.w[1] / tw.w[0] - hs2);
    b.l_s2 = clamp_sqrt(hv2 * tw.w[1] / tw.w[2] - hs2);
    return b;
}

namespace {

double unnormalised_pdf(const SegmentTable& table, double lambda, double x) {
    if (x < 0.0 || !std::isfinite(x)) return 0.0;
    for (const auto& seg : table.segments) {
        if (x < seg.x1 || std::isinf(seg.x1)) {
            const double u = -M_PI * (seg.a * x * x + seg.c);
            return 2.0 * M_PI * lambda * x * std::exp(u);
        }
    }
    return 0.0;
}

}  // namespace

double serving_distance_pdf(TierId tier, double x, const NetworkConfig& c) {
    const SegmentTable table = segment_table(tier, c);
    return unnormalised_pdf(table, c.tier(tier).intensity, x) / table.total;
}

double serving_distance_cdf(TierId tier, double x, const NetworkConfig& c) {
    if (x <= 0.0) return 0.0;
    const SegmentTable table = segment_table(tier, c);
    const double lambda = c.tier(tier).intensity;
    double acc = 0.0;
    for (const auto& seg : table.segments) {
        if (x >= seg.x1) {
            acc += seg.mass;
            continue;
        }
        const double u0 = -M_PI * (seg.a * seg.x0 * seg.x0 + seg.c);
        const double u1 = -M_PI * (seg.a * x * x + seg.c);
        acc += lambda / seg.a * std::exp(u0) * (-std::expm1(u1 - u0));
        break;
    }
    return std::min(1.0, acc / table.total);
}

namespace {

struct InterfererSet {
    std::array<bool, 3> in{};
};

InterfererSet interferers(Mode mode, TierId tier) {
    InterfererSet s;
    if (mode == Mode::Conventional) {
        s.in = {true, true, true};
    } else if (tier == TierId::Uav) {
        s.in = {false, false, true};
    } else {
        s.in = {true, true, false};
    }
    return s;
}

}  // namespace

double laplace_interference(Mode mode, TierId tier, double threshold, double z,
                            const NetworkConfig& c) {
    if (!(threshold >= 0.0)) {
        throw std::domain_error("laplace_interference: threshold must be >= 0");
    }
    if (threshold == 0.0) return 1.0;
    const double eta = c.path_loss_exponent;
    const int k = idx(tier);
    const InterfererSet set = interferers(mode, tier);

    double expo = 0.0;
    for (int j = 0; j < kNumTiers; ++j) {
        if (!set.in[j]) continue;
        // Exclusion radius implied by the serving signal, floored at the
        // interfering tier's minimum possible 3-D distance.
        const double d = std::pow(c.tiers[j].power / c.tiers[k].power, 1.0 / eta) * z;
        const double cut = std::max(c.tiers[j].height, d);
        const double q = threshold * std::pow(d / cut, eta);
        if (q <= 0.0) continue;
        expo += 2.0 * M_PI * c.tiers[j].intensity * cut * cut * q / (eta - 2.0) *
                hyp2f1_coverage(eta, q);
    }
    return std::exp(-expo);
}

double conditional_coverage(Mode mode, TierId tier, double threshold, double x,
                            const NetworkConfig& c) {
    const double h = c.tier(tier).height;
    const double z = std::hypot(x, h);
    const double eta = c.path_loss_exponent;
    const double noise =
        c.noise_power > 0.0
            ? std::exp(-threshold * c.noise_power * std::pow(z, eta) /
                       c.tier(tier).power)
            : 1.0;
    return noise * laplace_interference(mode, tier, threshold, z, c);
}

double coverage_probability(Mode mode, TierId tier, double threshold,
                            const NetworkConfig& c, const QuadratureSpec& quad) {
    if (threshold == 0.0) return 1.0;
    const SegmentTable table = segment_table(tier, c);
    const double lambda = c.tier(tier).intensity;

    double acc = 0.0;
    for (const auto& seg : table.segments) {
        auto f = [&](double x) {
            const double u = -M_PI * (seg.a * x * x + seg.c);
            const double dens = 2.0 * M_PI * lambda * x * std::exp(u);
            return dens * conditional_coverage(mode, tier, threshold, x, c);
        };
        // The conditional coverage is smooth inside a branch: the
        // interference exclusion regime switches exactly at branch edges.
        acc += integrate(f, seg.x0, seg.x1, quad);
    }
    return std::clamp(acc / table.total, 0.0, 1.0);
}

CoverageResult overall_coverage(Mode mode, double threshold,
                                const NetworkConfig& c,
                                const QuadratureSpec& quad) {
    const AssociationResult a = association_probabilities(c);
    CoverageResult r;
    r.mode = mode;
    r.threshold = threshold;
    r.c_m = coverage_probability(mode, TierId::Macro, threshold, c, quad);
    r.c_s = coverage_probability(mode, TierId::Small, threshold, c, quad);
    r.c_v = coverage_probability(mode, TierId::Uav, threshold, c, quad);
    r.overall = a.a_m * r.c_m + a.a_s * r.c_s + a.a_v * r.c_v;
    return r;
}

double spectral_efficiency(Mode mode, TierId tier, const NetworkConfig& c,
                           const QuadratureSpec& quad) {
    // E[log2(1+SINR)] = (1/ln 2) \int_0^inf C(T)/(1+T) dT. Substituting
    // T = t/(1-t) gives \int_0^1 C(t/(1-t))/(1-t) dt on a finite panel;
    // coverage decays faster than any power of T, so the integrand vanishes
    // smoothly at t = 1 and the adaptive rule certifies the tail.
    QuadratureSpec inner = quad;
    inner.rel_tol = std::max(quad.rel_tol, 1e-9);
    auto f = [&](double t) {
        const double threshold = t / (1.0 - t);
        const double cov = coverage_probability(mode, tier, threshold, c, inner);
        if (cov < 1e-12) return 0.0;
        return cov / (1.0 - t);
    };
    QuadratureSpec outer = quad;
    outer.abs_tol = std::max(quad.abs_tol, 1e-10);
    const double nats = integrate(f, 0.0, 1.0, outer);
    return nats / std::log(2.0);
}

RateResult application_rates_from(Mode mode, const std::array<double, 3>& se,
                                  const NetworkConfig& c) {
    RateResult r;
    r.mode = mode;
    r.spectral_efficiency = se;
    if (mode == Mode::Conventional) {
        const double budget = (1.0 - c.overhead_conventional) * c.bandwidth_total;
        for (int k = 0; k < kNumTiers; ++k) {
            r.application_rate[k] = budget * se[k];
        }
    } else {
        r.application_rate[idx(TierId::Macro)] =
            c.bandwidth_legacy * se[idx(TierId::Macro)];
        r.application_rate[idx(TierId::Small)] =
            c.bandwidth_legacy * se[idx(TierId::Small)];
        r.application_rate[idx(TierId::Uav)] =
            (1.0 - c.overhead_split) * c.bandwidth_uav * se[idx(TierId::Uav)];
    }
    return r;
}

RateResult application_rates(Mode mode, const NetworkConfig& c,
                             const QuadratureSpec& quad) {
    std::array<double, 3> se{};
    for (TierId t : kAllTiers) {
        se[idx(t)] = spectral_efficiency(mode, t, c, quad);
    }
    return application_rates_from(mode, se, c);
}

LoadResult mean_users(const NetworkConfig& c, const AssociationResult& assoc) {
    auto load = [&](TierId t, double a) {
        return 1.28 * c.user_intensity * a / c.tier(t).intensity + 1.0;
    };
    LoadResult r;
    r.n_m = load(TierId::Macro, assoc.a_m);
    r.n_s = load(TierId::Small, assoc.a_s);
    r.n_v = load(TierId::Uav, assoc.a_v);
    return r;
}

}  // namespace uavnet::analytic
