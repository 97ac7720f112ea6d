#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "uavnet/mobility.hpp"
#include "uavnet/model.hpp"

namespace uavnet::pipeline {

/// What a sweep varies.
enum class SweepVariable { Velocity, UavIntensity, Threshold };

const char* sweep_variable_name(SweepVariable v);

/// A batch evaluation request: a grid over one variable, the modes to
/// evaluate, and (for intensity sweeps) the linear coupling tying the other
/// tiers to the UAV intensity.
struct SweepSpec {
    SweepVariable variable = SweepVariable::Velocity;
    std::vector<double> grid;          ///< non-empty, strictly increasing
    std::set<Mode> modes{Mode::Conventional, Mode::Split};

    /// Fixed values for the dimensions not swept.
    double velocity = 20.0;            ///< m/s
    std::optional<double> threshold;   ///< linear; default: config value

    /// Intensity coupling (uav sweeps): lambda_m = couple_macro * lambda_v,
    /// lambda_s = couple_small * lambda_v. Coefficients must be positive.
    double couple_macro = 0.5;
    double couple_small = 1.0 / 3.0;

    /// Column filter; empty selects every column.
    std::vector<std::string> outputs;

    mobility::EstimationSpec estimation;
};

/// Default grids: velocity 0..40 m/s in steps of 5; a 7-point geometric
/// UAV-intensity ladder; thresholds -10..20 dB.
SweepSpec default_sweep(SweepVariable variable);

/// One fully evaluated parameter point.
struct PointResult {
    Mode mode = Mode::Conventional;
    double velocity = 0.0;
    AssociationResult association;
    CoverageResult coverage;
    mobility::ThroughputReport throughput;
};

/// Evaluates one point end to end (association, coverage at the config
/// threshold, rates, boundary estimation, throughput). Deterministic given
/// the seed; boundary estimates come from `cache` when provided.
PointResult run_point(const NetworkConfig& config, Mode mode, double velocity,
                      std::uint64_t seed,
                      const mobility::EstimationSpec& estimation = {},
                      mobility::BoundaryCache* cache = nullptr);

/// Tabular sweep output. Cells are preformatted with 9 significant digits so
/// emission is deterministic.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct SweepResult {
    Table table;
    std::vector<std::string> errors;  ///< one message per failed point
};

/// Runs the sweep: one row per (grid value, mode), grid-major, conventional
/// before split. Boundary estimates are cached across points that share
/// geometry (velocity and threshold sweeps reuse a single estimate).
SweepResult run_sweep(const SweepSpec& spec, const NetworkConfig& config,
                      std::uint64_t seed,
                      mobility::BoundaryCache* cache = nullptr);

enum class EmitFormat { Csv, Json };

/// Writes the table; CSV has one header row, JSON is an array of objects
/// keyed by the column names.
void emit(const Table& table, EmitFormat format, std::ostream& out);

/// Parses a CSV produced by emit(); used for round-trip checks.
Table parse_csv(std::istream& in);

}  // namespace uavnet::pipeline
