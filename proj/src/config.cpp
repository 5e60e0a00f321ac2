#include "scanplan/config.hpp"

#include <fstream>
#include <sstream>

#include "scanplan/errors.hpp"

namespace scanplan {

void PlanConfig::validate() const {
    if (!(sensor_range_r > 0.0)) throw ConfigError("r must be > 0");
    if (!(r_relaxed_factor >= 1.0)) throw ConfigError("r_relaxed_factor must be >= 1");
    if (!(eta >= 0.0 && eta < 1.0)) throw ConfigError("eta must be in [0, 1)");
    if (!(inflation_radius >= 0.0)) throw ConfigError("inflate must be >= 0");
    if (!(coverage_target > 0.0 && coverage_target <= 1.0))
        throw ConfigError("target must be in (0, 1]");
    if (candidate_stride < 1) throw ConfigError("stride must be >= 1");
    if (exact_universe_limit < 0) throw ConfigError("exact_universe_limit must be >= 0");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T v;
    if (!(in >> v) || !(in >> std::ws).eof())
        throw ConfigError("bad value '" + value + "' for config key '" + key + "'");
    return v;
}

}  // namespace

void apply_config_entry(PlanConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "r" || key == "sensor_range_r")
        cfg.sensor_range_r = parse_number<double>(key, value);
    else if (key == "r_relaxed_factor")
        cfg.r_relaxed_factor = parse_number<double>(key, value);
    else if (key == "eta")
        cfg.eta = parse_number<double>(key, value);
    else if (key == "inflate" || key == "inflation_radius")
        cfg.inflation_radius = parse_number<double>(key, value);
    else if (key == "target" || key == "coverage_target")
        cfg.coverage_target = parse_number<double>(key, value);
    else if (key == "stride" || key == "candidate_stride")
        cfg.candidate_stride = parse_number<int>(key, value);
    else if (key == "exact_universe_limit")
        cfg.exact_universe_limit = parse_number<std::int64_t>(key, value);
    else if (key == "seed")
        cfg.seed = parse_number<std::uint32_t>(key, value);
    else if (key == "close_loop")
        cfg.close_loop = parse_number<int>(key, value) != 0;
    else
        throw ConfigError("unknown config key '" + key + "'");
}

PlanConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    PlanConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              " is not 'key = value'");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

}  // namespace scanplan
