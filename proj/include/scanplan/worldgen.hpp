#pragma once

#include <cstdint>
#include <string>

#include "scanplan/grid.hpp"

namespace scanplan {

// Deterministic synthetic worlds for testing and benchmarks. All recipes
// produce a walled border and a single 4-connected free component.
struct WorldRecipe {
    std::string name = "empty";  // empty | corridor | rooms | loop | random-obstacles
    int width = 100;             // cells
    int height = 100;
    double resolution = OccupancyGrid::kDefaultResolution;
    std::uint32_t seed = 0;

    // Structure parameters (meters). Defaults keep passages wide enough to
    // survive the default 0.3 m inflation.
    double corridor_width = 1.6;
    double door_width = 1.4;
    double min_room = 2.4;
};

OccupancyGrid generate_world(const WorldRecipe& recipe);

}  // namespace scanplan
