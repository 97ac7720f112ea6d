#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace uavnet {

/// Base-station tier. The order is fixed and used for deterministic
/// tie-breaking when two candidates offer identical biased signal strength.
enum class TierId : int { Macro = 0, Small = 1, Uav = 2 };

inline constexpr std::array<TierId, 3> kAllTiers{TierId::Macro, TierId::Small,
                                                 TierId::Uav};

inline constexpr const char* tier_name(TierId t) {
    switch (t) {
        case TierId::Macro: return "macro";
        case TierId::Small: return "small";
        case TierId::Uav:   return "uav";
    }
    return "?";
}

/// Network operating mode: joint control/data on every tier, or the split
/// architecture where UAVs carry all control signalling on a dedicated band.
enum class Mode : int { Conventional = 0, Split = 1 };

inline constexpr const char* mode_name(Mode m) {
    return m == Mode::Conventional ? "conventional" : "split";
}

/// Thrown by validate() and the config loader. `kind` names the violated
/// invariant so callers can match on it.
class ConfigError : public std::runtime_error {
public:
    enum class Kind {
        ParseFailure,
        PathLossExponent,
        TierParameter,
        BandwidthSplit,
        Overhead,
        HandoverDelay,
        HeightOrdering,
        NoisePower,
        UserIntensity,
    };

    ConfigError(Kind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Thrown when adaptive quadrature cannot reach the requested tolerance.
/// Carries the best estimate and the achieved error bound.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(double estimate, double error_bound, std::string message)
        : std::runtime_error(std::move(message)),
          estimate_(estimate),
          error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

/// Thrown by Monte Carlo estimators on unusable inputs or when the achieved
/// statistical precision is insufficient for the request.
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace uavnet
