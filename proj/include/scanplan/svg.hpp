#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scanplan/bitset.hpp"
#include "scanplan/grid.hpp"

namespace scanplan {

struct SvgLayers {
    bool grid = true;
    bool covered = true;
    bool viewpoints = true;
    bool steiner = true;
    bool path = true;
};

// Parses "grid,covered,viewpoints,steiner,path" (any subset).
SvgLayers parse_svg_layers(const std::string& csv);

struct RenderModel {
    const OccupancyGrid* grid = nullptr;
    std::vector<CellIndex> viewpoint_cells;
    std::vector<CellIndex> steiner_cells;
    std::optional<Bitset> covered;                   // over FreeIndexer ids
    std::vector<std::vector<CellIndex>> polylines;   // tour path legs
};

// Deterministic SVG: occupied black, free white, unknown gray, covered
// yellow, viewpoints red dots, Steiner nodes yellow dots, path green.
std::string render_svg(const RenderModel& model, const SvgLayers& layers);

}  // namespace scanplan
