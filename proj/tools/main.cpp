// uavnet: batch evaluation of three-tier (macro/small/UAV) downlink
// networks. Subcommands: validate, point, sweep, oracle.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "uavnet/analytic.hpp"
#include "uavnet/mobility.hpp"
#include "uavnet/montecarlo.hpp"
#include "uavnet/pipeline.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

using namespace uavnet;

NetworkConfig load_or_default(const std::string& path) {
    if (path.empty()) return default_config();
    return load_config_file(path);
}

Mode parse_mode(const std::string& s) {
    if (s == "conventional" || s == "con") return Mode::Conventional;
    if (s == "split" || s == "sp") return Mode::Split;
    throw CLI::ValidationError("--mode", "expected 'conventional' or 'split'");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::string(buf);
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

int cmd_validate(const std::string& config_path) {
    const NetworkConfig c = load_or_default(config_path);
    std::cout << "ok: configuration is valid\n";
    write_config(std::cout, c);
    return 0;
}

int cmd_point(const std::string& config_path, const std::string& mode_str,
              double velocity, std::uint64_t seed, const std::string& out_path) {
    const NetworkConfig c = load_or_default(config_path);
    std::ofstream file;
    std::ostream& out = open_output(file, out_path);

    std::vector<Mode> modes;
    if (mode_str == "both") {
        modes = {Mode::Conventional, Mode::Split};
    } else {
        modes = {parse_mode(mode_str)};
    }
    for (Mode mode : modes) {
        const pipeline::PointResult p =
            pipeline::run_point(c, mode, velocity, seed);
        out << "mode = " << mode_name(mode) << "\n"
            << "velocity_mps = " << fmt(velocity) << "\n"
            << "assoc_macro = " << fmt(p.association.a_m) << "\n"
            << "assoc_small = " << fmt(p.association.a_s) << "\n"
            << "assoc_uav = " << fmt(p.association.a_v) << "\n"
            << "coverage = " << fmt(p.coverage.overall) << "\n";
        static constexpr const char* tiers[3] = {"macro", "small", "uav"};
        for (int k = 0; k < 3; ++k) {
            out << "speceff_" << tiers[k]
                << "_bps_hz = " << fmt(p.throughput.spectral_efficiency[k])
                << "\n";
            out << "rate_" << tiers[k]
                << "_bps = " << fmt(p.throughput.application_rate[k]) << "\n";
        }
        out << "ho_total_per_s = " << fmt(p.throughput.ho_total_rate) << "\n"
            << "ho_cost = " << fmt(p.throughput.handover_cost) << "\n"
            << "avg_throughput_bps = " << fmt(p.throughput.average_throughput)
            << "\n"
            << "avg_throughput_loaded_bps = "
            << fmt(p.throughput.average_throughput_loaded) << "\n";
        if (p.throughput.cost_saturated) {
            out << "# warning: handover cost reached 1; throughput clamped to 0\n";
        }
        out << "\n";
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& variable,
              const std::string& mode_str, std::vector<double> grid,
              double velocity, std::uint64_t seed, long trajectories,
              const std::string& out_path, const std::string& format) {
    const NetworkConfig c = load_or_default(config_path);

    pipeline::SweepVariable var;
    if (variable == "velocity") {
        var = pipeline::SweepVariable::Velocity;
    } else if (variable == "uav_intensity") {
        var = pipeline::SweepVariable::UavIntensity;
    } else if (variable == "threshold") {
        var = pipeline::SweepVariable::Threshold;
    } else {
        throw CLI::ValidationError("--variable",
                                   "expected velocity, uav_intensity or threshold");
    }

    pipeline::SweepSpec spec = pipeline::default_sweep(var);
    if (!grid.empty()) spec.grid = std::move(grid);
    spec.velocity = velocity;
    if (mode_str == "conventional" || mode_str == "con") {
        spec.modes = {Mode::Conventional};
    } else if (mode_str == "split" || mode_str == "sp") {
        spec.modes = {Mode::Split};
    }
    if (trajectories > 0) {
        spec.estimation.trajectories = static_cast<int>(trajectories);
    }

    const pipeline::SweepResult result = pipeline::run_sweep(spec, c, seed);

    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    pipeline::emit(result.table,
                   format == "json" ? pipeline::EmitFormat::Json
                                    : pipeline::EmitFormat::Csv,
                   out);
    if (!result.errors.empty()) {
        std::cerr << result.errors.size() << " point(s) failed:\n";
        for (const auto& e : result.errors) std::cerr << "  " << e << "\n";
        return kExitNumerical;
    }
    return 0;
}

int cmd_oracle(const std::string& config_path, const std::string& mode_str,
               long samples, double velocity, std::uint64_t seed,
               const std::string& dump_path) {
    const NetworkConfig c = load_or_default(config_path);
    const Mode mode = mode_str == "split" ? Mode::Split : Mode::Conventional;

    std::cout << "quantity,analytic,montecarlo,stderr,zscore\n";
    auto line = [](const std::string& name, double ana, double mc, double se) {
        const double z = se > 0.0 ? (ana - mc) / se : 0.0;
        std::cout << name << ',' << fmt(ana) << ',' << fmt(mc) << ',' << fmt(se)
                  << ',' << fmt(z) << "\n";
    };

    const AssociationResult assoc = analytic::association_probabilities(c);
    const auto assoc_mc = montecarlo::estimate_association(c, samples, seed);
    line("assoc_macro", assoc.a_m, assoc_mc.probability[0].value,
         assoc_mc.probability[0].standard_error);
    line("assoc_small", assoc.a_s, assoc_mc.probability[1].value,
         assoc_mc.probability[1].standard_error);
    line("assoc_uav", assoc.a_v, assoc_mc.probability[2].value,
         assoc_mc.probability[2].standard_error);

    std::vector<montecarlo::TrialRecord> records;
    const CoverageResult cov =
        analytic::overall_coverage(mode, c.sinr_threshold, c);
    const auto cov_mc = montecarlo::estimate_coverage(
        mode, c.sinr_threshold, c, samples, seed,
        dump_path.empty() ? nullptr : &records);
    line("coverage", cov.overall, cov_mc.overall.value,
         cov_mc.overall.standard_error);
    line("coverage_macro", cov.c_m, cov_mc.per_tier[0].value,
         cov_mc.per_tier[0].standard_error);
    line("coverage_small", cov.c_s, cov_mc.per_tier[1].value,
         cov_mc.per_tier[1].standard_error);
    line("coverage_uav", cov.c_v, cov_mc.per_tier[2].value,
         cov_mc.per_tier[2].standard_error);

    if (velocity > 0.0) {
        mobility::EstimationSpec est;
        const auto mu = mobility::boundary_intensities(c, est, seed);
        const auto rates = mobility::handover_rates(mu, velocity);
        const auto sim = montecarlo::simulate_handovers(
            c, velocity, mobility::auto_chord_length(c), 64, seed + 1);
        const double se = std::hypot(
            (2.0 / M_PI) * velocity * mu.total_standard_error,
            sim.total_standard_error);
        line("ho_total_per_s", rates.total_rate, sim.total_rate, se);
    }

    if (!dump_path.empty()) {
        std::ofstream dump(dump_path);
        if (!dump) throw std::runtime_error("cannot open dump file: " + dump_path);
        montecarlo::write_dump(dump, records);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"three-tier macro/small/UAV downlink network evaluator"};
    app.require_subcommand(1);

    std::string config_path, mode = "both", out_path, format = "csv";
    std::string variable = "velocity", dump_path;
    double velocity = 20.0;
    std::uint64_t seed = 1;
    long samples = 100000, trajectories = 0;
    std::vector<double> grid;

    auto* validate_cmd = app.add_subcommand("validate", "check a config file");
    validate_cmd->add_option("--config", config_path, "config file path");

    auto* point_cmd =
        app.add_subcommand("point", "evaluate one parameter point");
    point_cmd->add_option("--config", config_path, "config file path");
    point_cmd->add_option("--mode", mode, "conventional | split | both");
    point_cmd->add_option("--velocity", velocity, "user velocity, m/s");
    point_cmd->add_option("--seed", seed, "master RNG seed");
    point_cmd->add_option("--out", out_path, "output file (default stdout)");

    auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
    sweep_cmd->add_option("--config", config_path, "config file path");
    sweep_cmd->add_option("--variable", variable,
                          "velocity | uav_intensity | threshold");
    sweep_cmd->add_option("--mode", mode, "conventional | split | both");
    sweep_cmd->add_option("--grid", grid, "explicit grid values");
    sweep_cmd->add_option("--velocity", velocity,
                          "fixed velocity for non-velocity sweeps, m/s");
    sweep_cmd->add_option("--seed", seed, "master RNG seed");
    sweep_cmd->add_option("--trajectories", trajectories,
                          "chords per boundary estimate");
    sweep_cmd->add_option("--out", out_path, "output file (default stdout)");
    sweep_cmd->add_option("--format", format, "csv | json");

    auto* oracle_cmd = app.add_subcommand(
        "oracle", "cross-check the closed forms against Monte Carlo");
    oracle_cmd->add_option("--config", config_path, "config file path");
    oracle_cmd->add_option("--mode", mode, "conventional | split");
    oracle_cmd->add_option("--samples", samples, "Monte Carlo trials");
    oracle_cmd->add_option("--velocity", velocity,
                           "velocity for the handover check (0 disables)");
    oracle_cmd->add_option("--seed", seed, "master RNG seed");
    oracle_cmd->add_option("--dump", dump_path,
                           "write per-trial records to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) return cmd_validate(config_path);
        if (point_cmd->parsed()) {
            return cmd_point(config_path, mode, velocity, seed, out_path);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(config_path, variable, mode, grid, velocity, seed,
                             trajectories, out_path, format);
        }
        if (oracle_cmd->parsed()) {
            return cmd_oracle(config_path, mode, samples, velocity, seed,
                              dump_path);
        }
    } catch (const uavnet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const uavnet::QuadratureError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const uavnet::SimulationError& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
