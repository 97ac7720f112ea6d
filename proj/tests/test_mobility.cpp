#include "uavnet/mobility.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "detail/grid.hpp"
#include "detail/parallel.hpp"
#include "support.hpp"
#include "uavnet/montecarlo.hpp"

using namespace uavnet;
using namespace uavnet::mobility;
using uavnet::testkit::reference_config;

namespace {

NetworkConfig single_uav_tier(double lambda_v) {
    NetworkConfig c = reference_config();
    c.tier(TierId::Macro).intensity = 1e-30;
    c.tier(TierId::Small).intensity = 1e-30;
    c.tier(TierId::Uav).intensity = lambda_v;
    return c;
}

// Boundary length per area from a rasterised association map: differing
// axis-adjacent pixel pairs count gridline crossings, and the axis-line
// version of the Crofton formula gives mu = (pi/4) crossings * delta / area.
double pixel_boundary_intensity(const NetworkConfig& c, double half_side,
                                double delta, int realizations,
                                std::uint64_t seed) {
    const double guard = 2500.0;
    const int n = static_cast<int>(2.0 * half_side / delta);
    std::vector<double> mu(realizations, 0.0);

    detail::for_each_chunk(realizations, 1, [&](long, long b, long e) {
        for (long r = b; r < e; ++r) {
            const auto dep = montecarlo::sample_deployment(
                c, std::hypot(half_side, half_side) + guard, seed + 1000 * r);
            std::array<detail::PlanarGrid, 3> grids;
            std::array<double, 3> inv_w{}, h2{};
            for (int k = 0; k < 3; ++k) {
                std::vector<detail::Point> pts;
                for (const auto& p : dep.points[k]) pts.push_back({p.x, p.y});
                const double lam = c.tiers[k].intensity;
                grids[k].build(pts, dep.window_radius,
                               lam > 0.0 ? 0.75 / std::sqrt(lam)
                                         : dep.window_radius);
                inv_w[k] = 1.0 /
                           std::pow(c.tiers[k].power, 2.0 / c.path_loss_exponent);
                h2[k] = c.tiers[k].height * c.tiers[k].height;
            }
            auto serving = [&](double x, double y) {
                std::int64_t best_id = -1;
                double best = std::numeric_limits<double>::infinity();
                for (int k = 0; k < 3; ++k) {
                    if (grids[k].empty()) continue;
                    double r2 = 0.0;
                    const int i = grids[k].nearest(x, y, &r2);
                    const double m = (r2 + h2[k]) * inv_w[k];
                    if (best_id < 0 || m < best) {
                        best = m;
                        best_id = (static_cast<std::int64_t>(k) << 32) | i;
                    }
                }
                return best_id;
            };

            std::vector<std::int64_t> raster(static_cast<std::size_t>(n) * n);
            for (int iy = 0; iy < n; ++iy) {
                const double y = -half_side + (iy + 0.5) * delta;
                for (int ix = 0; ix < n; ++ix) {
                    const double x = -half_side + (ix + 0.5) * delta;
                    raster[static_cast<std::size_t>(iy) * n + ix] = serving(x, y);
                }
            }
            long crossings = 0;
            for (int iy = 0; iy < n; ++iy) {
                for (int ix = 0; ix + 1 < n; ++ix) {
                    crossings += raster[static_cast<std::size_t>(iy) * n + ix] !=
                                 raster[static_cast<std::size_t>(iy) * n + ix + 1];
                }
            }
            for (int iy = 0; iy + 1 < n; ++iy) {
                for (int ix = 0; ix < n; ++ix) {
                    crossings +=
                        raster[static_cast<std::size_t>(iy) * n + ix] !=
                        raster[(static_cast<std::size_t>(iy) + 1) * n + ix];
                }
            }
            const double area = (n * delta) * (n * delta);
            mu[r] = M_PI / 4.0 * static_cast<double>(crossings) * delta / area;
        }
    });
    double total = 0.0;
    for (double m : mu) total += m;
    return total / realizations;
}

}  // namespace

TEST(BoundaryIntensities, SingleTierClosedForm) {
    const double lambda = 5e-6;
    EstimationSpec spec;
    spec.trajectories = 2048;
    spec.length = 3000.0;
    const auto mu = boundary_intensities(single_uav_tier(lambda), spec, 17);
    const double want = 2.0 * std::sqrt(lambda);
    EXPECT_NEAR(mu.total, want, 0.02 * want);
    EXPECT_NEAR(mu.pair(TierId::Uav, TierId::Uav), mu.total, 1e-15);
    EXPECT_EQ(mu.pair(TierId::Macro, TierId::Small), 0.0);
}

TEST(BoundaryIntensities, ScalesWithSqrtIntensity) {
    // Quadrupling every intensity doubles each boundary length intensity
    // (heights only matter through the association weights, which are
    // untouched in a single-tier field).
    EstimationSpec spec;
    spec.trajectories = 1024;
    spec.length = 3000.0;
    const auto base = boundary_intensities(single_uav_tier(5e-6), spec, 3);
    spec.length = 1500.0;
    const auto dense = boundary_intensities(single_uav_tier(20e-6), spec, 4);
    const double ratio = dense.total / base.total;
    EXPECT_NEAR(ratio, 2.0, 0.06);
}

TEST(BoundaryIntensities, SymmetricNonNegativeAndFinite) {
    EstimationSpec spec;
    spec.trajectories = 256;
    const auto mu = boundary_intensities(reference_config(), spec, 5);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            EXPECT_GE(mu.mu[i][j], 0.0);
            EXPECT_TRUE(std::isfinite(mu.mu[i][j]));
            EXPECT_EQ(mu.mu[i][j], mu.mu[j][i]);
        }
    }
    EXPECT_GT(mu.total, 0.0);
}

TEST(BoundaryIntensities, InsufficientSamplesRejected) {
    EstimationSpec spec;
    spec.trajectories = 2;
    spec.length = 200.0;
    spec.max_relative_error = 0.01;
    EXPECT_THROW(boundary_intensities(reference_config(), spec, 1),
                 SimulationError);
}

TEST(BoundaryIntensities, PixelTracerAgreesOnReferenceConfig) {
    const NetworkConfig c = reference_config();
    EstimationSpec spec;
    spec.trajectories = 2048;
    spec.length = 4000.0;
    const auto chords = boundary_intensities(c, spec, 29);
    const double pixels = pixel_boundary_intensity(c, 3000.0, 1.0, 8, 71);
    EXPECT_NEAR(chords.total, pixels, 0.03 * chords.total);
}

TEST(HandoverRates, CoefficientsAndLinearity) {
    BoundaryIntensities mu;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) mu.mu[i][j] = 0.001 * (1 + i + j);
    }
    const HandoverStats at0 = handover_rates(mu, 0.0);
    EXPECT_EQ(at0.total_rate, 0.0);

    const HandoverStats a = handover_rates(mu, 7.0);
    const HandoverStats b = handover_rates(mu, 14.0);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double coef = i == j ? 2.0 / M_PI : 1.0 / M_PI;
            EXPECT_NEAR(a.ho_rate[i][j], coef * mu.mu[i][j] * 7.0, 1e-15);
            EXPECT_NEAR(b.ho_rate[i][j], 2.0 * a.ho_rate[i][j], 1e-15);
            EXPECT_EQ(a.ho_rate[i][j], a.ho_rate[j][i]);
        }
    }
    EXPECT_THROW(handover_rates(mu, -1.0), SimulationError);
}

TEST(HandoverRates, SingleTierCompositionAnchor) {
    // lambda_v = 5 per km^2 at 10 m/s: total rate (4/pi) sqrt(lambda) v.
    const double lambda = 5e-6, v = 10.0;
    EstimationSpec spec;
    spec.trajectories = 2048;
    spec.length = 3000.0;
    const auto mu = boundary_intensities(single_uav_tier(lambda), spec, 17);
    const auto rates = handover_rates(mu, v);
    const double want = 4.0 / M_PI * std::sqrt(lambda) * v;  // about 2.847e-2
    EXPECT_NEAR(rates.total_rate, want, 0.02 * want);
}

TEST(HandoverCost, DelaysAndModeOrdering) {
    NetworkConfig c = reference_config();
    BoundaryIntensities mu;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) mu.mu[i][j] = 0.0015;
    }
    const HandoverStats at0 = handover_rates(mu, 0.0);
    EXPECT_EQ(handover_cost(at0, c, Mode::Conventional), 0.0);
    EXPECT_EQ(handover_cost(at0, c, Mode::Split), 0.0);

    const HandoverStats rates = handover_rates(mu, 25.0);
    const double con = handover_cost(rates, c, Mode::Conventional);
    const double sp = handover_cost(rates, c, Mode::Split);
    EXPECT_LE(sp, con);

    NetworkConfig equal_delay = c;
    equal_delay.ho_delay_data = equal_delay.ho_delay_control;
    EXPECT_NEAR(handover_cost(rates, equal_delay, Mode::Split), con, 1e-15);

    // Composition anchor: single-tier rate 2.847e-2 at d_c = 0.7.
    EXPECT_NEAR(0.7 * 0.02847, 0.019929, 1e-6);
}

TEST(HandoverCost, UavVoronoiControlAlternative) {
    const NetworkConfig c = reference_config();
    EstimationSpec spec;
    spec.trajectories = 256;
    const auto mu = boundary_intensities(c, spec, 5);
    const auto rates = handover_rates(mu, 20.0);
    const double printed = handover_cost(rates, c, Mode::Split,
                                         VvControl::WeightedTessellation);
    const double voronoi =
        handover_cost(rates, c, Mode::Split, VvControl::UavVoronoi);
    EXPECT_GT(voronoi, 0.0);
    // The dedicated control tessellation has denser uav-uav boundaries than
    // the uav-uav share of the data tessellation, so its cost is higher.
    EXPECT_GT(voronoi, printed);
}

TEST(AverageThroughput, VelocityZeroAndUnloadedLimits) {
    NetworkConfig c = reference_config();
    BoundaryIntensities mu;  // zero boundaries: no handovers at all
    const ThroughputReport rep =
        average_throughput(Mode::Conventional, c, 0.0, mu);
    EXPECT_EQ(rep.handover_cost, 0.0);
    const AssociationResult a = analytic::association_probabilities(c);
    const RateResult rates = analytic::application_rates(Mode::Conventional, c);
    double want = 0.0;
    for (int k = 0; k < 3; ++k) {
        want += std::array<double, 3>{a.a_m, a.a_s, a.a_v}[k] *
                rates.application_rate[k];
    }
    EXPECT_NEAR(rep.average_throughput, want, 1e-6 * want);
    EXPECT_LE(rep.average_throughput_loaded, rep.average_throughput);

    NetworkConfig unloaded = c;
    unloaded.user_intensity = 0.0;
    const ThroughputReport u =
        average_throughput(Mode::Conventional, unloaded, 0.0, mu);
    EXPECT_NEAR(u.average_throughput_loaded, u.average_throughput, 1e-12);
}

TEST(AverageThroughput, CostClampedAtExtremeVelocity) {
    const NetworkConfig c = reference_config();
    EstimationSpec spec;
    spec.trajectories = 256;
    const auto mu = boundary_intensities(c, spec, 5);
    const ThroughputReport rep =
        average_throughput(Mode::Conventional, c, 5000.0, mu);
    EXPECT_TRUE(rep.cost_saturated);
    EXPECT_EQ(rep.average_throughput, 0.0);
    EXPECT_GE(rep.handover_cost, 1.0);
}

TEST(AverageThroughput, NonIncreasingInVelocityAndModeOrdering) {
    const NetworkConfig c = reference_config();
    EstimationSpec spec;
    spec.trajectories = 384;
    const auto mu = boundary_intensities(c, spec, 5);
    double prev_con = std::numeric_limits<double>::infinity();
    double prev_sp = std::numeric_limits<double>::infinity();
    for (double v = 0.0; v <= 40.0; v += 5.0) {
        const auto con = average_throughput(Mode::Conventional, c, v, mu);
        const auto sp = average_throughput(Mode::Split, c, v, mu);
        EXPECT_LE(sp.handover_cost, con.handover_cost + 1e-15) << "v=" << v;
        EXPECT_LE(con.average_throughput, prev_con + 1e-9) << "v=" << v;
        EXPECT_LE(sp.average_throughput, prev_sp + 1e-9) << "v=" << v;
        prev_con = con.average_throughput;
        prev_sp = sp.average_throughput;
    }
}

TEST(AverageThroughput, CrossingRatesMatchTrajectorySimulation) {
    const NetworkConfig c = reference_config();
    const double v = 20.0;
    EstimationSpec spec;
    spec.trajectories = 1024;
    const auto mu = boundary_intensities(c, spec, 5);
    const auto rates = handover_rates(mu, v);
    const auto sim = montecarlo::simulate_handovers(c, v, 4000.0, 128, 123);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double coef = i == j ? 2.0 / M_PI : 1.0 / M_PI;
            const double se = std::hypot(coef * mu.standard_error[i][j] * v,
                                         sim.standard_error[i][j]);
            EXPECT_NEAR(rates.ho_rate[i][j], sim.rate[i][j], 3.5 * se)
                << "pair " << i << j;
        }
    }
}

TEST(AverageThroughput, LoadedThroughputTurningPointOverCoupledIntensity) {
    // Coupled densification (macro = half, small = third of the uav
    // intensity) on a geometric ladder within 0.5..50 per km^2. The load
    // relief initially outweighs the handover cost; at 120 m/s the cost
    // catches up inside the window and the curve turns over.
    const NetworkConfig base = reference_config();
    const double v = 120.0;
    EstimationSpec spec;
    spec.trajectories = 256;
    std::vector<double> atu;
    for (int i = 0; i < 7; ++i) {
        const double lambda_v = 0.5e-6 * std::pow(100.0, i / 6.0);
        NetworkConfig c = base;
        c.tier(TierId::Uav).intensity = lambda_v;
        c.tier(TierId::Macro).intensity = lambda_v / 2.0;
        c.tier(TierId::Small).intensity = lambda_v / 3.0;
        validate(c);
        const auto mu = boundary_intensities(c, spec, 61);
        atu.push_back(average_throughput(Mode::Conventional, c, v, mu)
                          .average_throughput_loaded);
    }
    const auto max_it = std::max_element(atu.begin(), atu.end());
    const std::size_t arg = max_it - atu.begin();
    EXPECT_GT(arg, 0u) << "maximum sits on the lower grid edge";
    EXPECT_LT(arg, atu.size() - 1) << "maximum sits on the upper grid edge";
}

TEST(BoundaryCache, EstimatesOnceAndIsVelocityIndependent) {
    BoundaryCache cache;
    const NetworkConfig c = reference_config();
    EstimationSpec spec;
    spec.trajectories = 128;
    const auto& a = cache.get_or_estimate(c, spec, 9);
    const auto& b = cache.get_or_estimate(c, spec, 9);
    EXPECT_EQ(&a, &b);
    EXPECT_EQ(cache.estimation_count(), 1);

    NetworkConfig other = c;
    other.ho_delay_control = 0.3;  // same geometry: still one estimation
    cache.get_or_estimate(other, spec, 9);
    EXPECT_EQ(cache.estimation_count(), 1);

    other.tier(TierId::Uav).intensity *= 2.0;
    cache.get_or_estimate(other, spec, 9);
    EXPECT_EQ(cache.estimation_count(), 2);
}
