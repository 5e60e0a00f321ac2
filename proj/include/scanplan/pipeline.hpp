#pragma once

#include <string>
#include <vector>

#include "scanplan/bcd.hpp"
#include "scanplan/config.hpp"
#include "scanplan/coverage.hpp"
#include "scanplan/metrics.hpp"
#include "scanplan/pathplan.hpp"
#include "scanplan/svg.hpp"
#include "scanplan/tour.hpp"

namespace scanplan {

// Full plan for one map: inflate, cover, graph, tour, repair, validate.
struct PlanOutcome {
    OccupancyGrid inflated;
    ViewpointSet viewpoints;
    VisibilityGraph gv;
    Roadmap gr;
    Tour tour;
    std::vector<RepairRecord> repairs;
    std::vector<GridPath> leg_paths;
    MetricsReport metrics;
    bool coverage_ok = true;    // reachable coverage met the target
    bool disconnected = false;  // free space has more than one component
    std::vector<std::string> warnings;
};

PlanOutcome run_plan_pipeline(const OccupancyGrid& raw, const PlanConfig& cfg);

// Baseline sweep on an already-inflated grid, with the same metrics.
struct BcdOutcome {
    SweepPlan sweep;
    MetricsReport metrics;
    Bitset covered;  // union of viewpoint visible sets, over FreeIndexer ids
    std::vector<GridPath> leg_paths;
};

BcdOutcome run_bcd_pipeline(const OccupancyGrid& inflated, const PlanConfig& cfg);

// Artifact encoders. All JSON is stable, sorted-key, schema-versioned.
std::string viewpoints_to_json(const OccupancyGrid& grid, const ViewpointSet& vps);
std::string tour_to_json(const OccupancyGrid& grid, const PlanOutcome& outcome,
                         const PlanConfig& cfg);
std::string metrics_to_json(const MetricsReport& metrics, const OccupancyGrid& grid,
                            const PlanConfig& cfg, const std::vector<std::string>& warnings,
                            const std::vector<GridPath>* leg_paths = nullptr);
std::string compare_to_json(const MetricsReport& ours, const MetricsReport& bcd);

RenderModel make_render_model(const OccupancyGrid& grid, const PlanOutcome& outcome);

// Rebuilds a render model from serialized artifacts (grid.json must describe
// the inflated planning grid; coverage and paths are recomputed).
RenderModel render_model_from_artifacts(const OccupancyGrid& grid,
                                        const std::string& viewpoints_json,
                                        const std::string& tour_json);

}  // namespace scanplan
