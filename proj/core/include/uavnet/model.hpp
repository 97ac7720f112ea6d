#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "uavnet/types.hpp"

namespace uavnet {

/// Physical parameters of one base-station tier, in SI units.
struct TierParams {
    double intensity = 0.0;  ///< base stations per m^2, > 0
    double power = 0.0;      ///< transmit power in watts, > 0
    double height = 0.0;     ///< antenna height in metres, >= 0
};

/// Full network description. All values are SI; unit conversions happen at
/// the config-file boundary only. Immutable after validate(); safe to share
/// across threads.
struct NetworkConfig {
    std::array<TierParams, 3> tiers{};  ///< indexed by TierId

    double path_loss_exponent = 4.0;   ///< eta, > 2
    double bandwidth_total = 0.0;      ///< W, Hz
    double bandwidth_legacy = 0.0;     ///< W_c, Hz (macro/small band in split mode)
    double bandwidth_uav = 0.0;        ///< W_c', Hz (UAV band in split mode)
    double overhead_conventional = 0.0;  ///< mu_c in [0,1)
    double overhead_split = 0.0;         ///< mu_c' in [0,1)
    double ho_delay_control = 0.0;     ///< d_c, seconds
    double ho_delay_data = 0.0;        ///< d_c', seconds, <= d_c
    double user_intensity = 0.0;       ///< users per m^2, >= 0
    double noise_power = 0.0;          ///< sigma^2, watts, >= 0 (0 = interference-limited)
    double sinr_threshold = 1.0;       ///< default coverage threshold T, linear

    const TierParams& tier(TierId t) const { return tiers[static_cast<int>(t)]; }
    TierParams& tier(TierId t) { return tiers[static_cast<int>(t)]; }
};

/// dBm -> watts.
double dbm_to_watts(double dbm);
/// watts -> dBm. Requires a positive argument.
double watts_to_dbm(double watts);

/// Thermal noise power over `bandwidth_hz` with the given receiver noise
/// figure, in watts. Used as the default sigma^2 when a config omits it.
double thermal_noise_watts(double bandwidth_hz, double noise_figure_db = 9.0);

/// (P_k / P_j)^(2/eta). The biased-distance weight ratio between tiers.
double power_ratio(TierId k, TierId j, const NetworkConfig& config);

/// Checks every model invariant and returns the config unchanged on success.
/// Throws ConfigError naming the violated invariant otherwise. Idempotent.
const NetworkConfig& validate(const NetworkConfig& config);
NetworkConfig validate(NetworkConfig&& config);

/// 64-bit fingerprint of the geometry-relevant parameters (intensities,
/// powers, heights, path-loss exponent). Two configs with equal fingerprints
/// induce the same association tessellation, so boundary-length estimates
/// may be shared between them.
std::uint64_t geometry_fingerprint(const NetworkConfig& config);

/// Bundled reference network: a macro/small/UAV deployment with the defaults
/// used throughout the tests and docs.
NetworkConfig default_config();

/// Parses a config file (key = value lines with [tier] sections; units are
/// part of the key names). Throws ConfigError with file:line context on
/// failure. The result is validated.
NetworkConfig load_config_file(const std::string& path);
NetworkConfig parse_config(std::istream& in, const std::string& origin);

/// Writes `config` in the same key/value format accepted by the loader.
void write_config(std::ostream& out, const NetworkConfig& config);

}  // namespace uavnet
