#pragma once

#include <array>
#include <vector>

#include "uavnet/model.hpp"
#include "uavnet/specfun.hpp"
#include "uavnet/types.hpp"

namespace uavnet {

/// Tier association probabilities with their additive sub-terms.
/// a_m = a_m1 + a_m2, a_s = a_s1 + a_s2 + a_s3, and the three totals sum
/// to one. Every part is non-negative.
struct AssociationResult {
    double a_m = 0.0, a_s = 0.0, a_v = 0.0;
    double a_m1 = 0.0, a_m2 = 0.0;
    double a_s1 = 0.0, a_s2 = 0.0, a_s3 = 0.0;

    double of(TierId t) const {
        switch (t) {
            case TierId::Macro: return a_m;
            case TierId::Small: return a_s;
            case TierId::Uav:   return a_v;
        }
        return 0.0;
    }
};

/// Horizontal distances at which the serving-distance laws change branch.
/// Radicands that come out negative are clamped to zero: the corresponding
/// branch is empty for that parameter set.
struct DistanceBreakpoints {
    double l_m = 0.0;   ///< macro law: UAV competition reachable beyond this
    double l_s1 = 0.0;  ///< small law: macro competition reachable beyond this
    double l_s2 = 0.0;  ///< small law: UAV competition reachable beyond this
};

/// Coverage at one SINR threshold: per-tier conditionals and their
/// association-weighted combination.
struct CoverageResult {
    Mode mode = Mode::Conventional;
    double threshold = 1.0;  ///< linear SINR
    double c_m = 0.0, c_s = 0.0, c_v = 0.0;
    double overall = 0.0;

    double of(TierId t) const {
        switch (t) {
            case TierId::Macro: return c_m;
            case TierId::Small: return c_s;
            case TierId::Uav:   return c_v;
        }
        return 0.0;
    }
};

/// Per-tier spectral efficiency (bit/s/Hz) and application rate (bit/s)
/// after bandwidth and control-overhead accounting.
struct RateResult {
    Mode mode = Mode::Conventional;
    std::array<double, 3> spectral_efficiency{};  ///< R_k, bit/s/Hz
    std::array<double, 3> application_rate{};     ///< T_k, bit/s

    double se(TierId t) const { return spectral_efficiency[static_cast<int>(t)]; }
    double rate(TierId t) const { return application_rate[static_cast<int>(t)]; }
};

/// Mean number of users sharing the serving base station, per tier (>= 1).
struct LoadResult {
    double n_m = 1.0, n_s = 1.0, n_v = 1.0;

    double of(TierId t) const {
        switch (t) {
            case TierId::Macro: return n_m;
            case TierId::Small: return n_s;
            case TierId::Uav:   return n_v;
        }
        return 1.0;
    }
};

namespace analytic {

/// One branch of a tier's service-distance law: on [x0, x1) the
/// unnormalised density is 2 pi lambda_k x exp(-pi (a x^2 + c)) and `mass`
/// is its integral over the branch. `actives` counts the competing tiers
/// whose suppression is in force on the branch.
struct DistanceSegment {
    double x0 = 0.0;
    double x1 = 0.0;  ///< +inf on the last branch
    double a = 0.0;
    double c = 0.0;
    double mass = 0.0;
    int actives = 0;
};

/// The full piecewise law for one tier; `total` is the tier's association
/// probability (the integral of the unnormalised density).
struct SegmentTable {
    std::vector<DistanceSegment> segments;
    double total = 0.0;
};

/// Builds the exact piecewise service-distance law of one tier. Branch
/// boundaries are placed where a competing tier first becomes able to beat
/// the serving candidate; boundaries whose radicand is negative collapse
/// to zero (empty branch).
SegmentTable segment_table(TierId tier, const NetworkConfig& config);

/// Association probabilities of the three tiers with sub-terms.
AssociationResult association_probabilities(const NetworkConfig& config);

/// The three named branch boundaries of the distance laws.
DistanceBreakpoints breakpoints(const NetworkConfig& config);

/// Service-distance density f_{X_k}(x) (per metre). Zero outside support.
double serving_distance_pdf(TierId tier, double x, const NetworkConfig& config);

/// Service-distance CDF, exact (closed form per branch).
double serving_distance_cdf(TierId tier, double x, const NetworkConfig& config);

/// Laplace transform of the aggregate interference seen by a user served by
/// `tier` at 3-D distance z (z >= tier height), evaluated at the coverage
/// argument s = T z^eta / P_k. The interfering set depends on the mode:
/// conventional takes all three tiers, split takes {macro, small} for
/// ground service and the UAV tier alone for UAV service. Each interfering
/// tier is excluded out to max(antenna height, association exclusion
/// radius); the height floor matters whenever the exclusion implied by the
/// serving signal falls below the tier's minimum possible 3-D distance.
double laplace_interference(Mode mode, TierId tier, double threshold, double z,
                            const NetworkConfig& config);

/// P[SINR > T | serving tier, horizontal distance x]: the noise factor
/// times the interference Laplace transform.
double conditional_coverage(Mode mode, TierId tier, double threshold, double x,
                            const NetworkConfig& config);

/// Tier coverage: the conditional coverage integrated against the tier's
/// service-distance law, with quadrature panels split at the branch
/// boundaries.
double coverage_probability(Mode mode, TierId tier, double threshold,
                            const NetworkConfig& config,
                            const QuadratureSpec& quad = {});

/// Association-weighted total coverage.
CoverageResult overall_coverage(Mode mode, double threshold,
                                const NetworkConfig& config,
                                const QuadratureSpec& quad = {});

/// E[log2(1 + SINR)] for a user of the given tier, via the layer-cake
/// integral of coverage over the threshold.
double spectral_efficiency(Mode mode, TierId tier, const NetworkConfig& config,
                           const QuadratureSpec& quad = {});

/// Spectral efficiencies and the resulting application rates for one mode.
RateResult application_rates(Mode mode, const NetworkConfig& config,
                             const QuadratureSpec& quad = {});

/// Same, reusing precomputed spectral efficiencies (indexed by TierId).
RateResult application_rates_from(Mode mode, const std::array<double, 3>& se,
                                  const NetworkConfig& config);

/// Mean users sharing each tier's serving station.
LoadResult mean_users(const NetworkConfig& config,
                      const AssociationResult& assoc);

}  // namespace analytic

}  // namespace uavnet
