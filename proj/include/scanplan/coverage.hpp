#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "scanplan/grid.hpp"
#include "scanplan/visibility.hpp"

namespace scanplan {

// Candidate scoring: normalized set size minus an exponential penalty that
// pulls viewpoints away from obstacles.
double viewpoint_score(std::int64_t setsize, std::int64_t maxsize,
                       double obstacle_distance_m);

struct CoverageOptions {
    // Above this many free cells the initial scan is restricted to a lattice.
    std::int64_t exact_universe_limit = 40000;
    int candidate_stride = 4;
};

struct SelectedViewpoint {
    CellIndex cell;
    VisibleSet visible;
    double score_at_selection = 0.0;
    std::int64_t newly_covered = 0;
    bool from_fallback = false;
};

struct ViewpointSet {
    std::vector<SelectedViewpoint> viewpoints;
    CoverageMask mask;
    double r = 0.0;
    // Free cells 4-connected to the initial viewpoint; coverage targets are
    // measured against these.
    std::int64_t reachable_free_count = 0;
    bool fallback_used = false;
    bool unreachable_free = false;  // free cells exist outside the reachable component

    double coverage_over_reachable() const {
        return reachable_free_count > 0
                   ? static_cast<double>(mask.covered_count) / reachable_free_count
                   : 0.0;
    }
};

// Candidate with the largest visible set (ties: smallest row-major index).
// Scans every free cell, or a stride lattice on large maps.
std::pair<CellIndex, VisibleSet> select_initial(const OccupancyGrid& grid,
                                                const FreeIndexer& indexer, double r,
                                                const CoverageOptions& opts = {});

struct GreedyTimings {
    double universe_s = 0.0;  // initial visible-set scan
    double loop_s = 0.0;      // contour scoring iterations
};

// Greedy set covering: seed with the largest visible set, then repeatedly
// score the covered union's contour cells by marginal gain and obstacle
// distance, taking the argmax, until the target coverage of the reachable
// free space is met. Falls back to the best uncovered reachable cell when no
// contour candidate makes progress.
ViewpointSet greedy_cover(const OccupancyGrid& grid, double r, double target,
                          const CoverageOptions& opts = {},
                          GreedyTimings* timings = nullptr);

}  // namespace scanplan
