#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "uavnet/model.hpp"

namespace uavnet {

namespace {

struct Entry {
    double value;
    int line;
    bool used = false;
};

[[noreturn]] void parse_fail(const std::string& origin, int line,
                             const std::string& msg) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << msg;
    throw ConfigError(ConfigError::Kind::ParseFailure, os.str());
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, e - b + 1);
}

}  // namespace

NetworkConfig parse_config(std::istream& in, const std::string& origin) {
    std::map<std::string, Entry> values;
    std::string section;
    std::string raw;
    int lineno = 0;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                parse_fail(origin, lineno, "unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "macro" && section != "small" && section != "uav") {
                parse_fail(origin, lineno,
                           "unknown section [" + section +
                               "]; expected [macro], [small] or [uav]");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            parse_fail(origin, lineno, "expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) {
            parse_fail(origin, lineno, "empty key or value");
        }

        double num = 0.0;
        try {
            std::size_t pos = 0;
            num = std::stod(val, &pos);
            if (pos != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            parse_fail(origin, lineno, "not a number: '" + val + "'");
        }

        std::string full = section.empty() ? key : section + "." + key;
        if (values.count(full)) {
            parse_fail(origin, lineno, "duplicate key '" + full + "'");
        }
        values[full] = Entry{num, lineno};
    }

    auto take = [&](const std::string& key) -> std::optional<double> {
        auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    };
    auto require = [&](const std::string& key) -> double {
        auto v = take(key);
        if (!v) {
            parse_fail(origin, 0, "missing required key '" + key + "'");
        }
        return *v;
    };

    NetworkConfig c;
    static constexpr const char* names[3] = {"macro", "small", "uav"};
    for (int t = 0; t < 3; ++t) {
        const std::string p(names[t]);
        c.tiers[t].power = dbm_to_watts(require(p + ".power_dbm"));
        c.tiers[t].height = require(p + ".height_m");
        c.tiers[t].intensity = require(p + ".intensity_per_km2") * 1e-6;
    }

    c.path_loss_exponent = require("path_loss_exponent");
    c.bandwidth_total = require("bandwidth_total_mhz") * 1e6;
    c.bandwidth_legacy = require("bandwidth_legacy_mhz") * 1e6;
    if (auto wc = take("bandwidth_uav_mhz")) {
        c.bandwidth_uav = *wc * 1e6;
    } else {
        c.bandwidth_uav = c.bandwidth_total - c.bandwidth_legacy;
    }
    c.overhead_conventional = require("overhead_conventional");
    c.overhead_split = require("overhead_split");
    c.ho_delay_control = require("ho_delay_control_s");
    c.ho_delay_data = require("ho_delay_data_s");
    c.user_intensity = require("user_intensity_per_km2") * 1e-6;

    const auto noise_dbm = take("noise_power_dbm");
    const auto noise_w = take("noise_power_watts");
    if (noise_dbm && noise_w) {
        parse_fail(origin, values["noise_power_watts"].line,
                   "give noise_power_dbm or noise_power_watts, not both");
    }
    if (noise_dbm) {
        c.noise_power = dbm_to_watts(*noise_dbm);
    } else if (noise_w) {
        c.noise_power = *noise_w;
    } else {
        c.noise_power = thermal_noise_watts(c.bandwidth_total);
    }

    if (auto t = take("sinr_threshold_db")) {
        c.sinr_threshold = std::pow(10.0, *t / 10.0);
    }

    for (const auto& [key, entry] : values) {
        if (!entry.used) {
            parse_fail(origin, entry.line, "unknown key '" + key + "'");
        }
    }

    validate(c);
    return c;
}

NetworkConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(ConfigError::Kind::ParseFailure,
                          path + ": cannot open config file");
    }
    return parse_config(in, path);
}

void write_config(std::ostream& out, const NetworkConfig& c) {
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.9g", v);
        return std::string(buf);
    };
    out << "path_loss_exponent = " << num(c.path_loss_exponent) << "\n"
        << "bandwidth_total_mhz = " << num(c.bandwidth_total / 1e6) << "\n"
        << "bandwidth_legacy_mhz = " << num(c.bandwidth_legacy / 1e6) << "\n"
        << "bandwidth_uav_mhz = " << num(c.bandwidth_uav / 1e6) << "\n"
        << "overhead_conventional = " << num(c.overhead_conventional) << "\n"
        << "overhead_split = " << num(c.overhead_split) << "\n"
        << "ho_delay_control_s = " << num(c.ho_delay_control) << "\n"
        << "ho_delay_data_s = " << num(c.ho_delay_data) << "\n"
        << "user_intensity_per_km2 = " << num(c.user_intensity * 1e6) << "\n"
        << "noise_power_watts = " << num(c.noise_power) << "\n";
    if (c.sinr_threshold > 0.0) {
        out << "sinr_threshold_db = "
            << num(10.0 * std::log10(c.sinr_threshold)) << "\n";
    }
    static constexpr const char* names[3] = {"macro", "small", "uav"};
    for (int t = 0; t < 3; ++t) {
        out << "\n[" << names[t] << "]\n"
            << "power_dbm = " << num(watts_to_dbm(c.tiers[t].power)) << "\n"
            << "height_m = " << num(c.tiers[t].height) << "\n"
            << "intensity_per_km2 = " << num(c.tiers[t].intensity * 1e6) << "\n";
    }
}

}  // namespace uavnet
