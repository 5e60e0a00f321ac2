#pragma once

#include <cstdint>
#include <string>

namespace scanplan {

// Planner knobs. Defaults: 2 m sensor range (panoramic overlap rule),
// relaxed roadmap range 1.5x, eta from the ~50 s cost of an extra scan at a
// 0.5 m/s travel speed, 0.3 m inflation.
struct PlanConfig {
    double sensor_range_r = 2.0;     // m
    double r_relaxed_factor = 1.5;   // roadmap range = factor * r
    double eta = 0.96;               // detour-cost balance in [0, 1)
    double inflation_radius = 0.3;   // m
    double coverage_target = 1.0;    // fraction of reachable free cells
    int candidate_stride = 4;        // lattice stride above the exact limit
    std::int64_t exact_universe_limit = 40000;
    std::uint32_t seed = 0;
    bool close_loop = false;  // return to the start viewpoint

    double r_relaxed() const { return sensor_range_r * r_relaxed_factor; }
    void validate() const;  // throws ConfigError
};

// Flat key = value file ('#' comments). Unknown keys are rejected.
PlanConfig load_config_file(const std::string& path);

// Applies one key/value pair (file loader and CLI overrides share this).
void apply_config_entry(PlanConfig& cfg, const std::string& key, const std::string& value);

}  // namespace scanplan
