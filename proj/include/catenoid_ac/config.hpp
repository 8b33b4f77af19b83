#pragma once

// Flat key=value run configuration.

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "catenoid_ac/csv.hpp"
#include "catenoid_ac/errors.hpp"
#include "catenoid_ac/profiles.hpp"

namespace catenoid_ac {

enum class FarFieldBC { fixed_constant, ansatz_tracking };

inline std::string to_string(FarFieldBC bc) {
    return bc == FarFieldBC::fixed_constant ? "fixed-constant" : "ansatz-tracking";
}

struct RunConfig {
    int N = 2;
    int k = 2;
    double t0 = -1e4;
    double t_end = std::numeric_limits<double>::quiet_NaN();  // NaN: t0 + 1000
    double y_max = 0.0;                                       // 0: r(y_max) = rho_k(t0) + 15
    std::size_t n = 4001;
    double dt = 0.0;  // 0: min(0.2, h)
    double theta = 0.5;
    double sigma = 1.0;
    std::size_t snapshot_every = 500;
    FarFieldBC far_field_bc = FarFieldBC::fixed_constant;
    std::string output_dir = ".";

    double resolved_t_end() const { return std::isnan(t_end) ? t0 + 1000.0 : t_end; }

    void validate() const {
        if (N < 2) throw ConfigurationError("N must be >= 2");
        if (k < 1) throw ConfigurationError("k must be >= 1");
        const double te = resolved_t_end();
        if (!(t0 < te)) throw ConfigurationError("t0 must be smaller than t_end");
        if (!(te <= -2.0)) throw ConfigurationError("t_end must be <= -2");
        if (n < 8) throw ConfigurationError("n must be >= 8");
        if (!(y_max >= 0.0)) throw ConfigurationError("y_max must be positive (or 0 for auto)");
        if (!(dt >= 0.0)) throw ConfigurationError("dt must be positive (or 0 for auto)");
        if (!(theta >= 0.5 && theta <= 1.0)) throw ConfigurationError("theta must lie in [1/2, 1]");
        if (!(sigma > 0.0 && sigma < kSqrt2)) throw ConfigurationError("sigma must lie in (0, sqrt 2)");
        if (snapshot_every == 0) throw ConfigurationError("snapshot_every must be positive");
        if (output_dir.empty()) throw ConfigurationError("output_dir must not be empty");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double config_number(const std::string& key, const std::string& value) {
    if (value == "auto") return 0.0;
    try {
        return parse_double(value);
    } catch (const IoError&) {
        throw ConfigurationError("config key '" + key + "': not a number: '" + value + "'");
    }
}

inline long long config_integer(const std::string& key, const std::string& value) {
    const double x = config_number(key, value);
    if (x != std::floor(x)) throw ConfigurationError("config key '" + key + "' must be an integer");
    return static_cast<long long>(x);
}

inline std::size_t config_count(const std::string& key, const std::string& value) {
    const long long x = config_integer(key, value);
    if (x < 0) throw ConfigurationError("config key '" + key + "' must be non-negative");
    return static_cast<std::size_t>(x);
}

}  // namespace detail

/// Parses `key = value` lines. Blank lines and lines starting with '#' are ignored;
/// unknown or repeated keys are errors.
inline RunConfig parse_run_config(std::istream& is) {
    RunConfig cfg;
    std::string line;
    std::set<std::string> seen;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigurationError("config line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (!seen.insert(key).second) throw ConfigurationError("config key '" + key + "' given twice");
        if (key == "N") cfg.N = static_cast<int>(detail::config_integer(key, value));
        else if (key == "k") cfg.k = static_cast<int>(detail::config_integer(key, value));
        else if (key == "t0") cfg.t0 = detail::config_number(key, value);
        else if (key == "t_end") cfg.t_end = value == "auto" ? std::numeric_limits<double>::quiet_NaN()
                                                             : detail::config_number(key, value);
        else if (key == "y_max") cfg.y_max = detail::config_number(key, value);
        else if (key == "n") cfg.n = detail::config_count(key, value);
        else if (key == "dt") cfg.dt = detail::config_number(key, value);
        else if (key == "theta") cfg.theta = detail::config_number(key, value);
        else if (key == "sigma") cfg.sigma = detail::config_number(key, value);
        else if (key == "snapshot_every") cfg.snapshot_every = detail::config_count(key, value);
        else if (key == "far_field_bc") {
            if (value == "fixed-constant") cfg.far_field_bc = FarFieldBC::fixed_constant;
            else if (value == "ansatz-tracking") cfg.far_field_bc = FarFieldBC::ansatz_tracking;
            else throw ConfigurationError("far_field_bc must be fixed-constant or ansatz-tracking");
        } else if (key == "output_dir") cfg.output_dir = value;
        else throw ConfigurationError("unknown config key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

inline RunConfig parse_run_config(const std::string& text) {
    std::istringstream is(text);
    return parse_run_config(is);
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config '" + path + "'");
    return parse_run_config(is);
}

}  // namespace catenoid_ac
