#include "uavnet/model.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace uavnet {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) {
    if (!(watts > 0.0)) {
        throw std::domain_error("watts_to_dbm: argument must be positive");
    }
    return 10.0 * std::log10(watts) + 30.0;
}

double thermal_noise_watts(double bandwidth_hz, double noise_figure_db) {
    // -174 dBm/Hz thermal floor plus the receiver noise figure.
    return dbm_to_watts(-174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
}

double power_ratio(TierId k, TierId j, const NetworkConfig& config) {
    const double e = 2.0 / config.path_loss_exponent;
    // Ratio of per-tier weights rather than pow(Pk/Pj, e): keeps the
    // reciprocal and transitivity identities exact to rounding.
    return std::pow(config.tier(k).power, e) / std::pow(config.tier(j).power, e);
}

namespace {

[[noreturn]] void fail(ConfigError::Kind kind, const std::string& msg) {
    throw ConfigError(kind, msg);
}

void check_finite(double v, ConfigError::Kind kind, const char* what) {
    if (!std::isfinite(v)) {
        fail(kind, std::string(what) + " must be finite");
    }
}

}  // namespace

const NetworkConfig& validate(const NetworkConfig& c) {
    if (!(c.path_loss_exponent > 2.0) || !std::isfinite(c.path_loss_exponent)) {
        fail(ConfigError::Kind::PathLossExponent,
             "path loss exponent must exceed 2 (got " +
                 std::to_string(c.path_loss_exponent) + ")");
    }
    for (TierId t : kAllTiers) {
        const TierParams& p = c.tier(t);
        check_finite(p.intensity, ConfigError::Kind::TierParameter, "intensity");
        check_finite(p.power, ConfigError::Kind::TierParameter, "power");
        check_finite(p.height, ConfigError::Kind::TierParameter, "height");
        if (!(p.intensity > 0.0)) {
            fail(ConfigError::Kind::TierParameter,
                 std::string(tier_name(t)) + ": intensity must be positive");
        }
        if (!(p.power > 0.0)) {
            fail(ConfigError::Kind::TierParameter,
                 std::string(tier_name(t)) + ": power must be positive");
        }
        if (p.height < 0.0) {
            fail(ConfigError::Kind::TierParameter,
                 std::string(tier_name(t)) + ": height must be non-negative");
        }
    }

    const double hm = c.tier(TierId::Macro).height;
    const double hs = c.tier(TierId::Small).height;
    const double hv = c.tier(TierId::Uav).height;
    if (!(hv > hm && hm > hs)) {
        std::ostringstream os;
        os << "height ordering violated: need uav > macro > small, got uav="
           << hv << " macro=" << hm << " small=" << hs;
        fail(ConfigError::Kind::HeightOrdering, os.str());
    }

    if (!(c.bandwidth_total > 0.0) || c.bandwidth_legacy <= 0.0 ||
        c.bandwidth_uav < 0.0) {
        fail(ConfigError::Kind::BandwidthSplit,
             "bandwidths: need W > 0, W_c > 0, W_c' >= 0");
    }
    const double split_err =
        std::abs(c.bandwidth_total - (c.bandwidth_legacy + c.bandwidth_uav));
    if (split_err > 1e-9 * c.bandwidth_total) {
        fail(ConfigError::Kind::BandwidthSplit,
             "bandwidth split does not add up: W != W_c + W_c'");
    }

    for (double mu : {c.overhead_conventional, c.overhead_split}) {
        if (!(mu >= 0.0 && mu < 1.0)) {
            fail(ConfigError::Kind::Overhead,
                 "control overheads must lie in [0, 1)");
        }
    }

    if (c.ho_delay_control < 0.0 || c.ho_delay_data < 0.0) {
        fail(ConfigError::Kind::HandoverDelay, "handover delays must be >= 0");
    }
    if (c.ho_delay_data > c.ho_delay_control) {
        fail(ConfigError::Kind::HandoverDelay,
             "split data handover delay must not exceed the control delay");
    }

    if (c.user_intensity < 0.0 || !std::isfinite(c.user_intensity)) {
        fail(ConfigError::Kind::UserIntensity, "user intensity must be >= 0");
    }
    if (c.noise_power < 0.0 || !std::isfinite(c.noise_power)) {
        fail(ConfigError::Kind::NoisePower, "noise power must be >= 0");
    }
    if (c.sinr_threshold < 0.0 || !std::isfinite(c.sinr_threshold)) {
        fail(ConfigError::Kind::TierParameter, "SINR threshold must be >= 0");
    }
    return c;
}

NetworkConfig validate(NetworkConfig&& config) {
    validate(config);
    return std::move(config);
}

std::uint64_t geometry_fingerprint(const NetworkConfig& c) {
    auto mix = [](std::uint64_t h, double v) {
        h ^= std::bit_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) +
             (h >> 2);
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 33;
        return h;
    };
    std::uint64_t h = 0x5eed5eed5eed5eedULL;
    for (TierId t : kAllTiers) {
        h = mix(h, c.tier(t).intensity);
        h = mix(h, c.tier(t).power);
        h = mix(h, c.tier(t).height);
    }
    h = mix(h, c.path_loss_exponent);
    return h;
}

NetworkConfig default_config() {
    NetworkConfig c;
    const double per_km2 = 1e-6;  // 1/km^2 -> 1/m^2
    c.tier(TierId::Macro) = {4.0 * per_km2, dbm_to_watts(45.0), 40.0};
    c.tier(TierId::Small) = {15.0 * per_km2, dbm_to_watts(24.0), 20.0};
    c.tier(TierId::Uav)   = {5.0 * per_km2, dbm_to_watts(30.0), 45.0};
    c.path_loss_exponent = 4.0;
    c.bandwidth_total = 10e6;
    c.bandwidth_legacy = 7e6;
    c.bandwidth_uav = 3e6;
    c.overhead_conventional = 0.3;
    c.overhead_split = 0.5;
    c.ho_delay_control = 0.7;
    c.ho_delay_data = 0.1;
    c.user_intensity = 100.0 * per_km2;
    c.noise_power = thermal_noise_watts(c.bandwidth_total);
    c.sinr_threshold = 1.0;  // 0 dB
    return c;
}

}  // namespace uavnet
