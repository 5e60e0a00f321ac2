#include "scanplan/bcd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scanplan {

namespace {

// Maximal vertical free runs of one column.
std::vector<SweepPlan::Lane> column_runs(const OccupancyGrid& grid, int col) {
    std::vector<SweepPlan::Lane> runs;
    int start = -1;
    for (int r = 0; r <= grid.height(); ++r) {
        const bool free = r < grid.height() && grid.at(r, col) == Cell::Free;
        if (free && start < 0) start = r;
        if (!free && start >= 0) {
            runs.push_back({col, start, r - 1});
            start = -1;
        }
    }
    return runs;
}

// Exact Euclidean distance of every cell to the nearest lane cell, via the
// obstacle distance transform on a scratch grid whose "obstacles" are lanes.
ObstacleDistanceField lane_distance(const OccupancyGrid& grid,
                                    const std::vector<SweepPlan::Lane>& lanes) {
    OccupancyGrid scratch(grid.width(), grid.height(), grid.resolution(), grid.origin(),
                          grid.origin_theta(), Cell::Free);
    for (const auto& lane : lanes)
        for (int r = lane.row_start; r <= lane.row_end; ++r)
            scratch.set(r, lane.col, Cell::Occupied);
    return distance_field(scratch);
}

}  // namespace

SweepPlan bcd_plan(const OccupancyGrid& grid, double r, double lane_spacing) {
    if (!(lane_spacing > 0.0))
        throw std::invalid_argument("bcd_plan: lane_spacing must be positive");

    SweepPlan plan;
    plan.lane_spacing = lane_spacing;

    const double res = grid.resolution();
    const int stride = std::max(1, static_cast<int>(std::floor(lane_spacing / res)));

    int first_free_col = -1;
    for (int c = 0; c < grid.width() && first_free_col < 0; ++c)
        for (int row = 0; row < grid.height(); ++row)
            if (grid.at(row, c) == Cell::Free) { first_free_col = c; break; }
    if (first_free_col < 0) return plan;  // nothing to sweep

    for (int c = first_free_col; c < grid.width(); c += stride) {
        auto runs = column_runs(grid, c);
        plan.lanes.insert(plan.lanes.end(), runs.begin(), runs.end());
    }

    // Repair pass: pockets between lattice columns get their own lanes.
    while (true) {
        ObstacleDistanceField df = lane_distance(grid, plan.lanes);
        CellIndex missing{-1, -1};
        for (int row = 0; row < grid.height() && missing.row < 0; ++row)
            for (int col = 0; col < grid.width(); ++col)
                if (grid.at(row, col) == Cell::Free &&
                    (!df.has_obstacles || df.meters(row, col) > lane_spacing)) {
                    missing = {row, col};
                    break;
                }
        if (missing.row < 0) break;
        auto runs = column_runs(grid, missing.col);
        for (const auto& run : runs)
            if (run.row_start <= missing.row && missing.row <= run.row_end) {
                plan.lanes.push_back(run);
                break;
            }
    }

    std::sort(plan.lanes.begin(), plan.lanes.end(), [](const auto& a, const auto& b) {
        return a.col != b.col ? a.col < b.col : a.row_start < b.row_start;
    });

    // Sample viewpoints along each lane, alternating sweep direction.
    const int step = std::max(1, static_cast<int>(std::floor(r / res)));
    for (std::size_t i = 0; i < plan.lanes.size(); ++i) {
        const auto& lane = plan.lanes[i];
        std::vector<int> rows;
        for (int row = lane.row_start; row < lane.row_end; row += step) rows.push_back(row);
        rows.push_back(lane.row_end);
        if (i % 2 == 1) std::reverse(rows.begin(), rows.end());
        for (int row : rows) plan.viewpoints.push_back({row, lane.col});
    }
    return plan;
}

}  // namespace scanplan
