#pragma once

// Shared grid builders for the test suites.

#include <string>
#include <vector>

#include "scanplan/grid.hpp"
#include "scanplan/worldgen.hpp"

namespace fixtures {

using scanplan::Cell;
using scanplan::CellIndex;
using scanplan::OccupancyGrid;

// '.' free, '#' occupied, '?' unknown. Row 0 of the vector is grid row 0.
inline OccupancyGrid grid_from_ascii(const std::vector<std::string>& rows,
                                     double resolution = 0.1) {
    const int h = static_cast<int>(rows.size());
    const int w = static_cast<int>(rows.front().size());
    OccupancyGrid g(w, h, resolution);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            const char ch = rows[r][c];
            g.set(r, c, ch == '#' ? Cell::Occupied : ch == '?' ? Cell::Unknown : Cell::Free);
        }
    return g;
}

inline OccupancyGrid all_free(int w, int h, double resolution = 0.1) {
    return OccupancyGrid(w, h, resolution);
}

inline void fill_rect(OccupancyGrid& g, int r0, int c0, int r1, int c1,
                      Cell v = Cell::Occupied) {
    for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c)
            if (g.in_bounds(r, c)) g.set(r, c, v);
}

inline void add_border(OccupancyGrid& g) {
    fill_rect(g, 0, 0, 0, g.width() - 1);
    fill_rect(g, g.height() - 1, 0, g.height() - 1, g.width() - 1);
    fill_rect(g, 0, 0, g.height() - 1, 0);
    fill_rect(g, 0, g.width() - 1, g.height() - 1, g.width() - 1);
}

inline OccupancyGrid recipe_world(const std::string& name, int w, int h,
                                  std::uint32_t seed, double resolution = 0.1) {
    scanplan::WorldRecipe rec;
    rec.name = name;
    rec.width = w;
    rec.height = h;
    rec.resolution = resolution;
    rec.seed = seed;
    return scanplan::generate_world(rec);
}

// Building-scale scenario with one infeasible tour edge whose repair must
// choose between a long visibility-graph route and a roadmap shortcut that
// needs one extra stop. Eight nodes; edge 0-1 is blocked by a wall spur.
struct DetourScenario {
    OccupancyGrid grid{1, 1, 1.0};
    std::vector<CellIndex> nodes;  // indices 0..7 = x1..x8
    double r = 20.0;
    double r_relaxed = 30.0;
};

inline DetourScenario detour_scenario() {
    DetourScenario s;
    // 128 x 128 cells at 0.5 m/cell = 64 m x 64 m.
    s.grid = OccupancyGrid(128, 128, 0.5);
    add_border(s.grid);
    // Wall spur from the left border: rows 88..90 (y in [44, 45.5]),
    // cols 0..52 (x up to 26.5).
    fill_rect(s.grid, 88, 0, 90, 52);

    // Node cells (row, col); world = ((col+.5)*.5, (row+.5)*.5).
    s.nodes = {
        CellIndex{100, 18},  // x1 (9.25, 50.25), above the spur
        CellIndex{76, 18},   // x2 (9.25, 38.25), below the spur
        CellIndex{42, 24},   // x3 (12.25, 21.25)
        CellIndex{28, 60},   // x4 (30.25, 14.25)
        CellIndex{52, 88},   // x5 (44.25, 26.25)
        CellIndex{80, 76},   // x6 (38.25, 40.25)
        CellIndex{112, 54},  // x7 (27.25, 56.25)
        CellIndex{112, 92},  // x8 (46.25, 56.25)
    };
    return s;
}

}  // namespace fixtures
