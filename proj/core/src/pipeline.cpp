#include "uavnet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uavnet/analytic.hpp"

namespace uavnet::pipeline {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::string(buf);
}

void check_spec(const SweepSpec& spec) {
    if (spec.grid.empty()) {
        throw std::invalid_argument("sweep grid must not be empty");
    }
    for (std::size_t i = 1; i < spec.grid.size(); ++i) {
        if (!(spec.grid[i] > spec.grid[i - 1])) {
            throw std::invalid_argument("sweep grid must be strictly increasing");
        }
    }
    if (spec.modes.empty()) {
        throw std::invalid_argument("sweep must select at least one mode");
    }
    if (!(spec.couple_macro > 0.0) || !(spec.couple_small > 0.0)) {
        throw std::invalid_argument("intensity coupling coefficients must be positive");
    }
}

NetworkConfig with_uav_intensity(const NetworkConfig& base, double lambda_v,
                                 const SweepSpec& spec) {
    NetworkConfig c = base;
    c.tier(TierId::Uav).intensity = lambda_v;
    c.tier(TierId::Macro).intensity = spec.couple_macro * lambda_v;
    c.tier(TierId::Small).intensity = spec.couple_small * lambda_v;
    validate(c);
    return c;
}

// The full column set, in emission order. The header carries the units.
const std::vector<std::string>& all_columns(SweepVariable variable) {
    static const std::vector<std::string> kCommon = {
        "mode",
        "assoc_macro",
        "assoc_small",
        "assoc_uav",
        "coverage",
        "speceff_macro_bps_hz",
        "speceff_small_bps_hz",
        "speceff_uav_bps_hz",
        "ho_total_per_s",
        "ho_total_stderr_per_s",
        "ho_cost",
        "ho_cost_stderr",
        "avg_throughput_bps",
        "avg_throughput_stderr_bps",
        "avg_throughput_loaded_bps",
        "avg_throughput_loaded_stderr_bps",
    };
    static std::vector<std::string> velocity, uav, threshold;
    if (velocity.empty()) {
        velocity = {"velocity_mps"};
        velocity.insert(velocity.end(), kCommon.begin(), kCommon.end());
        uav = {"uav_intensity_per_km2"};
        uav.insert(uav.end(), kCommon.begin(), kCommon.end());
        threshold = {"threshold_db"};
        threshold.insert(threshold.end(), kCommon.begin(), kCommon.end());
    }
    switch (variable) {
        case SweepVariable::Velocity: return velocity;
        case SweepVariable::UavIntensity: return uav;
        case SweepVariable::Threshold: return threshold;
    }
    return velocity;
}

}  // namespace

const char* sweep_variable_name(SweepVariable v) {
    switch (v) {
        case SweepVariable::Velocity: return "velocity";
        case SweepVariable::UavIntensity: return "uav_intensity";
        case SweepVariable::Threshold: return "threshold";
    }
    return "?";
}

SweepSpec default_sweep(SweepVariable variable) {
    SweepSpec spec;
    spec.variable = variable;
    switch (variable) {
        case SweepVariable::Velocity:
            spec.grid = {0, 5, 10, 15, 20, 25, 30, 35, 40};
            break;
        case SweepVariable::UavIntensity:
            // geometric ladder, per km^2
            spec.grid = {1, 4, 16, 64, 256, 1024, 4096};
            break;
        case SweepVariable::Threshold:
            spec.grid = {-10, -5, 0, 5, 10, 15, 20};  // dB
            break;
    }
    return spec;
}

PointResult run_point(const NetworkConfig& config, Mode mode, double velocity,
                      std::uint64_t seed,
                      const mobility::EstimationSpec& estimation,
                      mobility::BoundaryCache* cache) {
    validate(config);
    PointResult r;
    r.mode = mode;
    r.velocity = velocity;
    r.association = analytic::association_probabilities(config);
    r.coverage = analytic::overall_coverage(mode, config.sinr_threshold, config);
    const RateResult rates = analytic::application_rates(mode, config);

    mobility::BoundaryIntensities mu;  // zero matrix is exact for v = 0
    if (velocity > 0.0) {
        if (cache) {
            mu = cache->get_or_estimate(config, estimation, seed);
        } else {
            mu = mobility::boundary_intensities(config, estimation, seed);
        }
    }
    r.throughput = mobility::average_throughput(mode, config, velocity, mu,
                                                r.association, rates);
    return r;
}

namespace {

std::vector<std::string> make_row(double swept, const PointResult& p) {
    std::vector<std::string> row;
    row.reserve(17);
    row.push_back(fmt(swept));
    row.push_back(mode_name(p.mode));
    row.push_back(fmt(p.association.a_m));
    row.push_back(fmt(p.association.a_s));
    row.push_back(fmt(p.association.a_v));
    row.push_back(fmt(p.coverage.overall));
    for (double se : p.throughput.spectral_efficiency) row.push_back(fmt(se));

    // Total crossing rate and its error, from the cost and the linearity of
    // both in the boundary intensities.
    const auto& t = p.throughput;
    double base = 0.0, base_u = 0.0;
    {
        const std::array<double, 3> a{p.association.a_m, p.association.a_s,
                                      p.association.a_v};
        const std::array<double, 3> n{t.loads.n_m, t.loads.n_s, t.loads.n_v};
        for (int k = 0; k < 3; ++k) {
            base += a[k] * t.application_rate[k];
            base_u += a[k] / n[k] * t.application_rate[k];
        }
    }
    row.push_back(fmt(t.ho_total_rate));
    row.push_back(fmt(t.ho_total_rate_stderr));
    row.push_back(fmt(t.handover_cost));
    row.push_back(fmt(t.handover_cost_stderr));
    row.push_back(fmt(t.average_throughput));
    row.push_back(fmt(t.cost_saturated ? 0.0 : base * t.handover_cost_stderr));
    row.push_back(fmt(t.average_throughput_loaded));
    row.push_back(fmt(t.cost_saturated ? 0.0 : base_u * t.handover_cost_stderr));
    return row;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const NetworkConfig& config,
                      std::uint64_t seed, mobility::BoundaryCache* cache) {
    check_spec(spec);
    validate(config);

    mobility::BoundaryCache local_cache;
    if (!cache) cache = &local_cache;

    SweepResult result;
    result.table.columns = all_columns(spec.variable);

    for (double value : spec.grid) {
        for (Mode mode : spec.modes) {
            try {
                NetworkConfig c = config;
                double velocity = spec.velocity;
                if (spec.threshold) c.sinr_threshold = *spec.threshold;
                switch (spec.variable) {
                    case SweepVariable::Velocity:
                        velocity = value;
                        break;
                    case SweepVariable::UavIntensity:
                        c = with_uav_intensity(config, value * 1e-6, spec);
                        if (spec.threshold) c.sinr_threshold = *spec.threshold;
                        break;
                    case SweepVariable::Threshold:
                        c.sinr_threshold = std::pow(10.0, value / 10.0);
                        break;
                }
                const PointResult p =
                    run_point(c, mode, velocity, seed, spec.estimation, cache);
                result.table.rows.push_back(make_row(value, p));
            } catch (const std::exception& err) {
                std::ostringstream os;
                os << sweep_variable_name(spec.variable) << "=" << value << " "
                   << mode_name(mode) << ": " << err.what();
                result.errors.push_back(os.str());
            }
        }
    }

    // Optional column filter.
    if (!spec.outputs.empty()) {
        std::vector<std::size_t> keep;
        std::vector<std::string> cols;
        for (std::size_t i = 0; i < result.table.columns.size(); ++i) {
            const std::string& c = result.table.columns[i];
            if (i < 2 || std::find(spec.outputs.begin(), spec.outputs.end(),
                                   c) != spec.outputs.end()) {
                keep.push_back(i);
                cols.push_back(c);
            }
        }
        for (auto& row : result.table.rows) {
            std::vector<std::string> filtered;
            filtered.reserve(keep.size());
            for (std::size_t i : keep) filtered.push_back(row[i]);
            row = std::move(filtered);
        }
        result.table.columns = std::move(cols);
    }
    return result;
}

void emit(const Table& table, EmitFormat format, std::ostream& out) {
    if (format == EmitFormat::Csv) {
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            out << (i ? "," : "") << table.columns[i];
        }
        out << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << (i ? "," : "") << row[i];
            }
            out << "\n";
        }
        return;
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj;
        for (std::size_t i = 0; i < table.columns.size() && i < row.size(); ++i) {
            const std::string& cell = row[i];
            // Numeric cells stay numeric in JSON; the mode column is text.
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end && *end == '\0' && end != cell.c_str()) {
                obj[table.columns[i]] = v;
            } else {
                obj[table.columns[i]] = cell;
            }
        }
        rows.push_back(std::move(obj));
    }
    out << rows.dump(2) << "\n";
}

Table parse_csv(std::istream& in) {
    Table t;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (header) {
            t.columns = std::move(cells);
            header = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

}  // namespace uavnet::pipeline
