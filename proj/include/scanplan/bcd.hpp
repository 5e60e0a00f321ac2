#pragma once

#include <vector>

#include "scanplan/grid.hpp"

namespace scanplan {

// Lawnmower baseline: vertical lanes over the free space, swept in
// alternating direction, with viewpoints dropped along each lane.
struct SweepPlan {
    struct Lane {
        int col = 0;
        int row_start = 0;  // inclusive
        int row_end = 0;    // inclusive
    };
    std::vector<Lane> lanes;
    std::vector<CellIndex> viewpoints;  // sweep order
    double lane_spacing = 0.0;
};

// Column lanes spaced <= lane_spacing apart, one lane polyline per maximal
// free run, swept top-down/bottom-up alternately; a viewpoint every <= r of
// arc length plus the run ends. Free pockets missed by the lattice get their
// own lanes so every free cell stays within lane_spacing of some lane.
SweepPlan bcd_plan(const OccupancyGrid& grid, double r, double lane_spacing);

}  // namespace scanplan
