#pragma once

#include <optional>
#include <vector>

#include "scanplan/grid.hpp"
#include "scanplan/tour.hpp"

namespace scanplan {

struct GridPath {
    std::vector<CellIndex> cells;  // consecutive cells are 8-adjacent
    double length = 0.0;           // resolution per orthogonal step, res*sqrt(2) per diagonal
};

// Minimal 8-connected path under the octile step metric. Diagonal moves are
// refused when both adjacent orthogonal cells are blocked (no corner cutting).
// Returns nullopt when the cells are disconnected.
std::optional<GridPath> astar(const OccupancyGrid& grid, CellIndex from, CellIndex to);

// Sum of astar lengths over consecutive tour nodes. Throws PlanningError when
// a leg is disconnected. Optionally returns the per-leg paths.
double tour_path_length(const OccupancyGrid& grid, const Tour& tour,
                        std::vector<GridPath>* legs = nullptr);

}  // namespace scanplan
