#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "scanplan/coverage.hpp"
#include "scanplan/grid.hpp"

namespace scanplan {

struct GraphEdge {
    int a = 0;
    int b = 0;
    double w = 0.0;  // Euclidean length in meters
};

// Undirected geometric graph over planned viewpoints (and, for the roadmap,
// Steiner nodes appended during tour repair).
struct Graph {
    std::vector<CellIndex> cells;
    std::vector<Vec2> pos;
    std::vector<GraphEdge> edges;

    int size() const { return static_cast<int>(cells.size()); }
    bool has_edge(int a, int b) const;
    void add_edge(int a, int b, double w);  // ignores duplicates/self-loops
    int add_node(CellIndex cell, Vec2 xy);
    // Neighbor lists sorted by node index (deterministic searches).
    std::vector<std::vector<std::pair<int, double>>> adjacency() const;
};

using VisibilityGraph = Graph;
using Roadmap = Graph;

struct TourNode {
    CellIndex cell;
    Vec2 xy;
    bool steiner = false;
};

struct TourLeg {
    int from = 0;
    int to = 0;
    double length = 0.0;  // straight-line
    bool feasible = false;
};

struct Tour {
    std::vector<TourNode> nodes;  // viewpoints in selection order, then Steiner
    std::vector<int> sequence;    // node ids, visit order
    std::vector<TourLeg> legs;
    double total_length = 0.0;
    int added_viewpoints = 0;  // Steiner nodes in the sequence
};

struct DetourPath {
    struct Waypoint {
        int node = -1;  // graph node id, or -1 for a fresh Steiner point
        CellIndex cell;
        Vec2 xy;
        bool steiner = false;
    };
    std::vector<Waypoint> waypoints;  // tail ... head inclusive
    double length = 0.0;              // sum of consecutive waypoint distances
    int new_viewpoint_count = 0;      // Steiner + path nodes not in the tour
    double cost = 0.0;                // filled by detour_cost
};

struct RepairRecord {
    int tail = 0;
    int head = 0;
    bool chose_roadmap = false;
    double psi_visibility = 0.0;  // +inf encoded as infinity()
    double psi_roadmap = 0.0;
    int new_nodes = 0;
};

std::vector<TourNode> make_tour_nodes(const OccupancyGrid& grid, const ViewpointSet& vps);

// Edge (i, j) present iff the viewpoints are mutually visible within r.
VisibilityGraph build_visibility_graph(const OccupancyGrid& grid,
                                       const std::vector<TourNode>& nodes, double r);

// Delaunay triangulation of the viewpoint positions with edges cut when they
// cross non-free space or exceed r_relaxed, then unioned with the visibility
// graph so G_v stays a subgraph.
Roadmap build_roadmap(const OccupancyGrid& grid, const VisibilityGraph& gv,
                      double r_relaxed);

// Open Hamiltonian path from `start`: nearest-neighbor construction improved
// by first-improvement 2-opt; small instances are additionally refined to the
// exact optimum by dynamic programming. Edge feasibility is ignored here and
// repaired by finalize_tour.
Tour initial_tsp_tour(const std::vector<TourNode>& nodes, int start);

// Splits a segment longer than r into ceil(len/r) legs; the interior points
// snap to nearest free cell centers. Fails when a snapped point is not free
// or any chain leg loses visibility.
std::optional<std::vector<CellIndex>> insert_steiner(const OccupancyGrid& grid,
                                                     CellIndex a, CellIndex b, double r);

// Shortest detour between the endpoints of an infeasible tour edge. With
// `steinerize`, roadmap edges longer than r get Steiner nodes (edges that fail
// steinerization are dropped and the search repeats). `in_tour` marks graph
// nodes already visited by the current tour; interior nodes outside it count
// towards new_viewpoint_count.
std::optional<DetourPath> detour(const Graph& graph, const OccupancyGrid& grid, int tail,
                                 int head, double r, const std::vector<char>& in_tour,
                                 bool steinerize);

// psi: (1 - eta) * length + eta * new_viewpoint_count.
double detour_cost(const DetourPath& path, double eta);

// Straight-line lengths and visibility flags for consecutive sequence pairs.
void annotate_legs(const OccupancyGrid& grid, Tour& tour, double r);

// Replaces every infeasible tour edge with the cheaper of the two detours
// (ties favor the visibility graph). Chosen Steiner chains are appended to the
// roadmap. Throws StrandedTourError when neither graph offers a detour.
Tour finalize_tour(const OccupancyGrid& grid, const Tour& initial, const VisibilityGraph& gv,
                   Roadmap& gr, double r, double eta,
                   std::vector<RepairRecord>* audit = nullptr);

}  // namespace scanplan
