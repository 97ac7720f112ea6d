#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "uavnet/model.hpp"
#include "uavnet/types.hpp"

namespace uavnet::montecarlo {

/// One sampled base-station field: per-tier points in a disk window around
/// the origin. Reproducible from (config, window_radius, seed).
struct Deployment {
    struct Pt {
        double x, y;
    };
    std::array<std::vector<Pt>, 3> points;  ///< indexed by TierId
    double window_radius = 0.0;
    std::uint64_t rng_seed = 0;
};

/// A Monte Carlo estimate with its standard error.
struct SimEstimate {
    double value = 0.0;
    double standard_error = 0.0;
    long samples = 0;
};

/// The association outcome for a user at the origin.
struct AssociationDraw {
    TierId tier = TierId::Macro;
    int index = -1;         ///< index into the winning tier's point list
    double horizontal = 0.0;  ///< horizontal distance, m
    double distance3d = 0.0;  ///< 3-D distance including antenna height, m
};

/// Per-trial record for the optional raw dump.
struct TrialRecord {
    std::uint64_t seed = 0;
    TierId tier = TierId::Macro;
    double distance3d = 0.0;
    double sinr = 0.0;  ///< linear; +inf when no interference and no noise
};

/// Draws per-tier Poisson point counts and uniform positions in the disk.
Deployment sample_deployment(const NetworkConfig& config, double window_radius,
                             std::uint64_t seed);

/// Max biased-received-power association for a user at the origin. Ties are
/// broken toward the lower TierId. Throws SimulationError if the deployment
/// is empty.
AssociationDraw associate(const Deployment& deployment,
                          const NetworkConfig& config);

/// Window radius that keeps the truncated interference below about 0.1% of
/// its mean, from the path-loss tail integral.
double default_window_radius(const NetworkConfig& config);

struct AssociationEstimate {
    std::array<SimEstimate, 3> probability;  ///< per TierId
};

/// Empirical association probabilities over independent deployments.
AssociationEstimate estimate_association(const NetworkConfig& config,
                                         long samples, std::uint64_t seed);

/// Horizontal serving distances grouped by winning tier (for distribution
/// tests). One deployment per draw.
std::array<std::vector<double>, 3> draw_serving_distances(
    const NetworkConfig& config, long samples, std::uint64_t seed);

struct CoverageEstimate {
    SimEstimate overall;
    std::array<SimEstimate, 3> per_tier;  ///< conditioned on the serving tier
};

/// Empirical P[SINR > threshold] with i.i.d. unit-mean exponential fading on
/// every link and the mode's interferer set. Records can be captured for the
/// raw dump via `records`.
CoverageEstimate estimate_coverage(Mode mode, double threshold,
                                   const NetworkConfig& config, long samples,
                                   std::uint64_t seed,
                                   std::vector<TrialRecord>* records = nullptr);

/// Coverage conditioned on the serving link: tier and horizontal distance
/// fixed, interferers drawn from the matching conditional law.
SimEstimate estimate_conditional_coverage(Mode mode, TierId tier,
                                          double threshold, double horizontal,
                                          const NetworkConfig& config,
                                          long samples, std::uint64_t seed);

/// Empirical Laplace transform E[exp(-s I_agg)] of the aggregate
/// interference for a user served by `tier` at 3-D distance `z`; interferers
/// of each tier are drawn beyond the exclusion implied by the serving
/// signal (floored at their antenna height).
SimEstimate estimate_laplace(Mode mode, TierId tier, double z, double s,
                             const NetworkConfig& config, long samples,
                             std::uint64_t seed);

struct HandoverSimulation {
    std::array<std::array<double, 3>, 3> rate{};  ///< events/s, symmetrised
    std::array<std::array<double, 3>, 3> standard_error{};
    double total_rate = 0.0;
    double total_standard_error = 0.0;
};

/// Walks straight trajectories at speed v through fresh deployments,
/// re-resolving the association every `step` metres and bisecting each
/// serving-station change to centimetre resolution. Crossing counts are
/// classified by the (from, to) tier pair.
HandoverSimulation simulate_handovers(const NetworkConfig& config, double v,
                                      double trajectory_length, int trials,
                                      std::uint64_t seed, double step = 0.5);

/// Writes the raw-sample dump (one tab-separated record per trial).
void write_dump(std::ostream& out, const std::vector<TrialRecord>& records);

}  // namespace uavnet::montecarlo
