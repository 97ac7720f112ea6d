#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "uavnet/analytic.hpp"
#include "uavnet/model.hpp"
#include "uavnet/types.hpp"

namespace uavnet::mobility {

/// Expected boundary length per unit area between each unordered tier pair
/// of the association tessellation (m/m^2), with standard errors.
struct BoundaryIntensities {
    std::array<std::array<double, 3>, 3> mu{};              ///< symmetric
    std::array<std::array<double, 3>, 3> standard_error{};  ///< symmetric
    double total = 0.0;           ///< sum over unordered pairs
    double total_standard_error = 0.0;

    double pair(TierId i, TierId j) const {
        return mu[static_cast<int>(i)][static_cast<int>(j)];
    }
};

/// Handover rates per ordered tier pair at one velocity, plus the per-mode
/// cost summaries once computed.
struct HandoverStats {
    std::array<std::array<double, 3>, 3> ho_rate{};  ///< events/s
    double velocity = 0.0;                           ///< m/s
    double total_rate = 0.0;                         ///< sum of all entries
    double cost_conventional = 0.0;
    double cost_split = 0.0;

    double rate(TierId i, TierId j) const {
        return ho_rate[static_cast<int>(i)][static_cast<int>(j)];
    }
};

/// Full mobility-aware throughput summary for one mode and velocity.
struct ThroughputReport {
    Mode mode = Mode::Conventional;
    double velocity = 0.0;
    std::array<double, 3> application_rate{};     ///< T_k, bit/s
    std::array<double, 3> spectral_efficiency{};  ///< R_k, bit/s/Hz
    LoadResult loads;
    double ho_total_rate = 0.0;   ///< all boundary crossings, events/s
    double ho_total_rate_stderr = 0.0;
    double handover_cost = 0.0;   ///< H_c, fraction of time in handover
    double handover_cost_stderr = 0.0;
    double average_throughput = 0.0;         ///< AT, bit/s (unloaded)
    double average_throughput_loaded = 0.0;  ///< AT_u, bit/s (fully loaded)
    bool cost_saturated = false;  ///< true when H_c reached 1 and was clamped
};

/// Estimation controls for the boundary-length Monte Carlo.
struct EstimationSpec {
    int trajectories = 384;   ///< independent chords
    double length = 0.0;      ///< chord length, m; 0 = auto from density
    double window = 0.0;      ///< guard margin, m; 0 = auto (5 / sqrt(min lambda))
    double step = 0.5;        ///< walk step, m
    double max_relative_error = 0.05;  ///< acceptance gate on the total
};

/// Estimates the boundary length intensities of the association tessellation
/// by dropping isotropic chords across independent deployments and counting
/// typed crossings: for any boundary class, E[crossings] = (2/pi) mu length.
/// Throws SimulationError if the total's relative standard error exceeds
/// spec.max_relative_error.
BoundaryIntensities boundary_intensities(const NetworkConfig& config,
                                         const EstimationSpec& spec,
                                         std::uint64_t seed);

/// Chord length used when spec.length is zero.
double auto_chord_length(const NetworkConfig& config);

/// Applies the crossing-rate coefficients: (2/pi) mu v on the diagonal,
/// (1/pi) mu v off it. Costs are not filled in here.
HandoverStats handover_rates(const BoundaryIntensities& mu, double v);

/// Which tessellation provides the control-plane boundaries of the split
/// architecture's UAV-UAV term.
enum class VvControl {
    WeightedTessellation,  ///< uav-uav boundaries of the data tessellation
    UavVoronoi,            ///< dedicated UAV Voronoi (mu_vv = 2 sqrt(lambda_v))
};

/// Handover cost for one mode: delay times the relevant crossing rates.
/// Conventional charges d_c on every ordered pair; split charges d_c on the
/// uav-uav term and d_c' on the rest.
double handover_cost(const HandoverStats& stats, const NetworkConfig& config,
                     Mode mode,
                     VvControl control = VvControl::WeightedTessellation);

/// Assembles the mobility-aware average throughput for one mode at velocity
/// v from precomputed association, rate, and boundary data. The factor
/// (1 - H_c) is floored at zero; `cost_saturated` reports when that happens.
ThroughputReport average_throughput(Mode mode, const NetworkConfig& config,
                                    double velocity,
                                    const BoundaryIntensities& mu,
                                    const AssociationResult& assoc,
                                    const RateResult& rates,
                                    VvControl control = VvControl::WeightedTessellation);

/// Convenience overload computing everything it needs.
ThroughputReport average_throughput(Mode mode, const NetworkConfig& config,
                                    double velocity,
                                    const BoundaryIntensities& mu);

/// Thread-safe cache of boundary estimates keyed by the geometry
/// fingerprint, the estimation parameters, and the seed. The estimation
/// counter lets callers verify reuse.
class BoundaryCache {
public:
    const BoundaryIntensities& get_or_estimate(const NetworkConfig& config,
                                               const EstimationSpec& spec,
                                               std::uint64_t seed);

    long estimation_count() const;
    void clear();

private:
    mutable std::mutex mutex_;
    std::unordered_map<std::uint64_t, std::unique_ptr<BoundaryIntensities>> map_;
    long estimations_ = 0;
};

}  // namespace uavnet::mobility
