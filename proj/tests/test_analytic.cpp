#include "uavnet/analytic.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "uavnet/montecarlo.hpp"

using namespace uavnet;
using namespace uavnet::analytic;
using uavnet::testkit::reference_config;

namespace {

double log_exponent_macro_route(const NetworkConfig& c) {
    // Final-branch exponent computed from the macro-tier factorisation.
    const double pr_mv = power_ratio(TierId::Macro, TierId::Uav, c);
    const double pr_sm = power_ratio(TierId::Small, TierId::Macro, c);
    const double pr_vm = power_ratio(TierId::Uav, TierId::Macro, c);
    const auto& t = c.tiers;
    const double hv2 = t[2].height * t[2].height;
    return -M_PI * pr_mv * hv2 *
               (t[0].intensity + t[1].intensity * pr_sm + t[2].intensity * pr_vm) +
           M_PI * (t[0].intensity * t[0].height * t[0].height +
                   t[1].intensity * t[1].height * t[1].height +
                   t[2].intensity * hv2);
}

double log_exponent_small_route(const NetworkConfig& c) {
    // The same exponent via the small-tier factorisation.
    const double pr_sv = power_ratio(TierId::Small, TierId::Uav, c);
    const double pr_ms = power_ratio(TierId::Macro, TierId::Small, c);
    const double pr_vs = power_ratio(TierId::Uav, TierId::Small, c);
    const auto& t = c.tiers;
    const double hv2 = t[2].height * t[2].height;
    return -M_PI * pr_sv * hv2 *
               (t[1].intensity + t[0].intensity * pr_ms + t[2].intensity * pr_vs) +
           M_PI * (t[0].intensity * t[0].height * t[0].height +
                   t[1].intensity * t[1].height * t[1].height +
                   t[2].intensity * hv2);
}

}  // namespace

TEST(Association, SymmetricDegenerateLimit) {
    // Equal powers and heights reduce association to intensity shares. The
    // config skips validate() deliberately: it is a boundary case of the
    // formulas, not an admissible network.
    NetworkConfig c = reference_config();
    for (TierId t : kAllTiers) {
        c.tier(t).power = 1.0;
        c.tier(t).height = 25.0;
    }
    c.tier(TierId::Macro).intensity = 4e-6;
    c.tier(TierId::Small).intensity = 15e-6;
    c.tier(TierId::Uav).intensity = 5e-6;
    const AssociationResult a = association_probabilities(c);
    EXPECT_NEAR(a.a_m, 4.0 / 24.0, 1e-12);
    EXPECT_NEAR(a.a_s, 15.0 / 24.0, 1e-12);
    EXPECT_NEAR(a.a_v, 5.0 / 24.0, 1e-12);
}

TEST(Association, VanishingUavIntensity) {
    NetworkConfig c = reference_config();
    c.tier(TierId::Uav).intensity = 1e-30;
    validate(c);
    const AssociationResult a = association_probabilities(c);
    EXPECT_LT(a.a_v, 1e-20);
    EXPECT_NEAR(a.a_m + a.a_s, 1.0, 1e-12);
}

TEST(Association, SumsToOneOnRandomConfigs) {
    std::mt19937_64 rng(20240601);
    for (int trial = 0; trial < 1000; ++trial) {
        const NetworkConfig c = testkit::random_valid_config(rng);
        const AssociationResult a = association_probabilities(c);
        EXPECT_NEAR(a.a_m + a.a_s + a.a_v, 1.0, 1e-9);
        for (double part : {a.a_m1, a.a_m2, a.a_s1, a.a_s2, a.a_s3}) {
            EXPECT_GE(part, 0.0);
        }
        EXPECT_NEAR(a.a_m1 + a.a_m2, a.a_m, 1e-12);
        EXPECT_NEAR(a.a_s1 + a.a_s2 + a.a_s3, a.a_s, 1e-12);
    }
}

TEST(Association, FinalBranchExponentIdentity) {
    // The closing branches of the macro and small laws share one decay
    // exponent; computing it through both factorisations guards the
    // cross-tier weight algebra.
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const NetworkConfig c = testkit::random_valid_config(rng);
        const double em = log_exponent_macro_route(c);
        const double es = log_exponent_small_route(c);
        EXPECT_NEAR(em, es, 1e-12 * std::max(1.0, std::abs(em)));
    }
}

TEST(Association, MatchesMonteCarlo) {
    const NetworkConfig c = reference_config();
    const AssociationResult a = association_probabilities(c);
    const auto mc = montecarlo::estimate_association(c, 20000, 99);
    const double vals[3] = {a.a_m, a.a_s, a.a_v};
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(vals[k], mc.probability[k].value,
                    3.5 * mc.probability[k].standard_error)
            << "tier " << k;
    }
}

TEST(Breakpoints, ReferenceValues) {
    const NetworkConfig c = reference_config();
    const DistanceBreakpoints b = breakpoints(c);
    // L_m = sqrt(h_v^2 (P_m/P_v)^(1/2) - h_m^2) at the reference powers.
    EXPECT_NEAR(b.l_m, 98.932, 1e-2);
    // The small-tier first radicand is negative here: clamped to zero.
    EXPECT_EQ(b.l_s1, 0.0);
    EXPECT_NEAR(b.l_s2, 24.797, 1e-2);
    EXPECT_LE(b.l_s1, b.l_s2);
}

TEST(DistanceLaw, NormalisedDensities) {
    const NetworkConfig c = reference_config();
    for (TierId tier : kAllTiers) {
        const SegmentTable table = segment_table(tier, c);
        double integral = 0.0;
        for (const auto& seg : table.segments) {
            integral += integrate(
                [&](double x) { return serving_distance_pdf(tier, x, c); },
                seg.x0, seg.x1);
        }
        EXPECT_NEAR(integral, 1.0, 1e-8) << tier_name(tier);
    }
}

TEST(DistanceLaw, CdfMatchesPdf) {
    const NetworkConfig c = reference_config();
    for (TierId tier : kAllTiers) {
        EXPECT_EQ(serving_distance_cdf(tier, 0.0, c), 0.0);
        EXPECT_NEAR(serving_distance_cdf(tier, 1e6, c), 1.0, 1e-12);
        for (double x : {10.0, 30.0, 80.0, 150.0, 400.0}) {
            const double h = 1e-3;
            const double slope = (serving_distance_cdf(tier, x + h, c) -
                                  serving_distance_cdf(tier, x - h, c)) /
                                 (2.0 * h);
            EXPECT_NEAR(slope, serving_distance_pdf(tier, x, c),
                        1e-5 + 1e-4 * slope)
                << tier_name(tier) << " x=" << x;
        }
    }
}

TEST(DistanceLaw, KolmogorovSmirnovAgainstDraws) {
    const NetworkConfig c = reference_config();
    const auto draws = montecarlo::draw_serving_distances(c, 20000, 4242);
    for (TierId tier : kAllTiers) {
        const auto& data = draws[static_cast<int>(tier)];
        ASSERT_GT(data.size(), 1000u) << tier_name(tier);
        const double d = uavnet::testkit::ks_statistic(
            data, [&](double x) { return serving_distance_cdf(tier, x, c); });
        EXPECT_LT(d, uavnet::testkit::ks_critical_1pct(data.size()))
            << tier_name(tier);
    }
}

TEST(Laplace, TrivialValues) {
    const NetworkConfig c = reference_config();
    for (Mode mode : {Mode::Conventional, Mode::Split}) {
        for (TierId tier : kAllTiers) {
            const double z = c.tier(tier).height + 30.0;
            EXPECT_EQ(laplace_interference(mode, tier, 0.0, z, c), 1.0);
            const double v = laplace_interference(mode, tier, 2.0, z, c);
            EXPECT_GT(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
    EXPECT_THROW(
        laplace_interference(Mode::Conventional, TierId::Macro, -1.0, 100.0, c),
        std::domain_error);
}

TEST(Laplace, SplitUavWithoutInterferers) {
    NetworkConfig c = reference_config();
    c.tier(TierId::Uav).intensity = 1e-30;
    for (double t : {0.1, 1.0, 100.0}) {
        EXPECT_NEAR(laplace_interference(Mode::Split, TierId::Uav, t, 60.0, c),
                    1.0, 1e-15);
    }
}

TEST(Laplace, MatchesMonteCarlo) {
    const NetworkConfig c = reference_config();
    const double z = 100.0, t = 1.0;
    const double s = t * std::pow(z, c.path_loss_exponent) /
                     c.tier(TierId::Macro).power;
    const double analytic_value =
        laplace_interference(Mode::Conventional, TierId::Macro, t, z, c);
    const auto mc = montecarlo::estimate_laplace(Mode::Conventional,
                                                 TierId::Macro, z, s, c,
                                                 100000, 1234);
    EXPECT_NEAR(analytic_value, mc.value, 3.0 * mc.standard_error);
}

TEST(ConditionalCoverage, TrivialAndScaleInvariant) {
    NetworkConfig c = reference_config();
    for (double x : {0.0, 25.0, 120.0}) {
        EXPECT_EQ(conditional_coverage(Mode::Conventional, TierId::Small, 0.0,
                                       x, c),
                  1.0);
    }
    c.noise_power = 0.0;
    NetworkConfig scaled = c;
    for (TierId t : kAllTiers) scaled.tier(t).power *= 10.0;
    for (double x : {5.0, 50.0, 200.0}) {
        const double a =
            conditional_coverage(Mode::Conventional, TierId::Small, 1.0, x, c);
        const double b = conditional_coverage(Mode::Conventional, TierId::Small,
                                              1.0, x, scaled);
        EXPECT_NEAR(a, b, 1e-12);
    }
}

TEST(ConditionalCoverage, MatchesPinnedMonteCarlo) {
    const NetworkConfig c = reference_config();
    const double analytic_value =
        conditional_coverage(Mode::Conventional, TierId::Small, 1.0, 50.0, c);
    const auto mc = montecarlo::estimate_conditional_coverage(
        Mode::Conventional, TierId::Small, 1.0, 50.0, c, 100000, 555);
    EXPECT_NEAR(analytic_value, mc.value, 3.0 * mc.standard_error);
}

TEST(Coverage, ThresholdLimits) {
    const NetworkConfig c = reference_config();
    for (Mode mode : {Mode::Conventional, Mode::Split}) {
        for (TierId tier : kAllTiers) {
            EXPECT_EQ(coverage_probability(mode, tier, 0.0, c), 1.0);
            EXPECT_LT(coverage_probability(mode, tier, 1e8, c), 1e-4);
        }
    }
}

TEST(Coverage, MonotoneInThreshold) {
    const NetworkConfig c = reference_config();
    double prev = 1.0;
    for (int i = 0; i < 50; ++i) {
        const double t = std::pow(10.0, -3.0 + 6.0 * i / 49.0);
        const double v =
            coverage_probability(Mode::Conventional, TierId::Macro, t, c);
        EXPECT_LE(v, prev + 1e-9) << "t=" << t;
        prev = v;
    }
}

TEST(Coverage, SplitNeverBelowConventional) {
    const NetworkConfig c = reference_config();
    for (TierId tier : kAllTiers) {
        for (double t : {0.1, 1.0, 10.0}) {
            const double con = coverage_probability(Mode::Conventional, tier, t, c);
            const double sp = coverage_probability(Mode::Split, tier, t, c);
            EXPECT_GE(sp, con - 1e-10) << tier_name(tier) << " t=" << t;
        }
    }
}

TEST(Coverage, PowerScaleInvarianceWithoutNoise) {
    NetworkConfig c = reference_config();
    c.noise_power = 0.0;
    for (double factor : {10.0, 0.1}) {
        NetworkConfig scaled = c;
        for (TierId t : kAllTiers) scaled.tier(t).power *= factor;
        for (TierId tier : kAllTiers) {
            const double a = coverage_probability(Mode::Conventional, tier, 1.0, c);
            const double b =
                coverage_probability(Mode::Conventional, tier, 1.0, scaled);
            EXPECT_NEAR(a, b, 1e-9);
        }
    }
}

TEST(Coverage, OverallIsConvexCombination) {
    const NetworkConfig c = reference_config();
    const CoverageResult r = overall_coverage(Mode::Conventional, 1.0, c);
    const double lo = std::min({r.c_m, r.c_s, r.c_v});
    const double hi = std::max({r.c_m, r.c_s, r.c_v});
    EXPECT_GE(r.overall, lo - 1e-12);
    EXPECT_LE(r.overall, hi + 1e-12);
    const AssociationResult a = association_probabilities(c);
    EXPECT_NEAR(r.overall, a.a_m * r.c_m + a.a_s * r.c_s + a.a_v * r.c_v, 1e-12);
}

TEST(Coverage, MatchesMonteCarlo) {
    const NetworkConfig c = reference_config();
    const CoverageResult r = overall_coverage(Mode::Conventional, 1.0, c);
    const auto mc =
        montecarlo::estimate_coverage(Mode::Conventional, 1.0, c, 20000, 31);
    EXPECT_NEAR(r.overall, mc.overall.value, 3.5 * mc.overall.standard_error);
}

TEST(SpectralEfficiency, NoiseDrownsEverything) {
    NetworkConfig c = reference_config();
    c.noise_power = 1e12;
    for (TierId tier : kAllTiers) {
        EXPECT_LT(spectral_efficiency(Mode::Conventional, tier, c), 1e-3);
    }
}

TEST(SpectralEfficiency, SplitBeatsConventionalForGroundTiers) {
    const NetworkConfig c = reference_config();
    EXPECT_GE(spectral_efficiency(Mode::Split, TierId::Small, c),
              spectral_efficiency(Mode::Conventional, TierId::Small, c));
}

TEST(SpectralEfficiency, MatchesMonteCarlo) {
    const NetworkConfig c = reference_config();
    const double analytic_value =
        spectral_efficiency(Mode::Conventional, TierId::Macro, c);
    // E[log2(1+SINR)] from the per-trial records of the coverage sampler.
    std::vector<montecarlo::TrialRecord> records;
    montecarlo::estimate_coverage(Mode::Conventional, 1.0, c, 100000, 808,
                                  &records);
    double sum = 0.0, sumsq = 0.0;
    long n = 0;
    for (const auto& rec : records) {
        if (rec.tier != TierId::Macro) continue;
        const double v = std::log2(1.0 + rec.sinr);
        sum += v;
        sumsq += v * v;
        ++n;
    }
    ASSERT_GT(n, 1000);
    const double mean = sum / n;
    const double se = std::sqrt((sumsq - n * mean * mean) / (n - 1.0) / n);
    EXPECT_NEAR(analytic_value, mean, 3.0 * se);
}

TEST(ApplicationRates, OverheadAndBandwidthArithmetic) {
    NetworkConfig c = reference_config();
    const std::array<double, 3> se{2.0, 1.5, 1.0};

    RateResult con = application_rates_from(Mode::Conventional, se, c);
    for (int k = 0; k < 3; ++k) {
        EXPECT_DOUBLE_EQ(con.application_rate[k], 0.7 * 10e6 * se[k]);
    }

    RateResult sp = application_rates_from(Mode::Split, se, c);
    EXPECT_DOUBLE_EQ(sp.rate(TierId::Macro), 7e6 * 2.0);
    EXPECT_DOUBLE_EQ(sp.rate(TierId::Small), 7e6 * 1.5);
    EXPECT_DOUBLE_EQ(sp.rate(TierId::Uav), 0.5 * 3e6 * 1.0);

    c.overhead_conventional = 1.0;  // boundary case, formula level
    con = application_rates_from(Mode::Conventional, se, c);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(con.application_rate[k], 0.0);

    c = reference_config();
    c.bandwidth_uav = 0.0;
    c.bandwidth_legacy = c.bandwidth_total;
    sp = application_rates_from(Mode::Split, se, c);
    EXPECT_EQ(sp.rate(TierId::Uav), 0.0);
}

TEST(MeanUsers, LimitsAndLinearity) {
    NetworkConfig c = reference_config();
    const AssociationResult a = association_probabilities(c);

    NetworkConfig unloaded = c;
    unloaded.user_intensity = 0.0;
    const LoadResult none = mean_users(unloaded, a);
    EXPECT_EQ(none.n_m, 1.0);
    EXPECT_EQ(none.n_s, 1.0);
    EXPECT_EQ(none.n_v, 1.0);

    const LoadResult base = mean_users(c, a);
    NetworkConfig doubled = c;
    doubled.user_intensity *= 2.0;
    const LoadResult twice = mean_users(doubled, a);
    EXPECT_NEAR(twice.n_v - 1.0, 2.0 * (base.n_v - 1.0), 1e-12);

    EXPECT_NEAR(base.n_v,
                1.28 * c.user_intensity * a.a_v /
                        c.tier(TierId::Uav).intensity +
                    1.0,
                1e-12);
    EXPECT_GE(base.n_m, 1.0);
}
