#pragma once

#include <map>
#include <string>

namespace scanplan {

// Summary of one planning run; serialized into metrics.json / compare.json.
struct MetricsReport {
    double coverage_percent = 0.0;  // over reachable free cells
    int viewpoint_count = 0;        // unique tour nodes, Steiner included
    double path_length_m = 0.0;     // A* length over the tour
    std::map<std::string, double> planning_time_s;  // per stage + total
    int infeasible_edges_repaired = 0;
    int detour_visibility = 0;  // repairs routed through G_v
    int detour_roadmap = 0;     // repairs routed through G_r
};

}  // namespace scanplan
