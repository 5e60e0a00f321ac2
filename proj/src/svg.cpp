#include "scanplan/svg.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "scanplan/visibility.hpp"

namespace scanplan {

SvgLayers parse_svg_layers(const std::string& csv) {
    SvgLayers layers{false, false, false, false, false};
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "grid") layers.grid = true;
        else if (item == "covered") layers.covered = true;
        else if (item == "viewpoints") layers.viewpoints = true;
        else if (item == "steiner") layers.steiner = true;
        else if (item == "path") layers.path = true;
        else if (item == "all") layers = SvgLayers{};
        else if (!item.empty())
            throw std::invalid_argument("unknown SVG layer '" + item + "'");
    }
    return layers;
}

namespace {

constexpr int kScale = 4;  // px per cell

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// Merge horizontal runs of same-class cells into single rects.
template <class Pred>
void emit_runs(std::ostringstream& out, const OccupancyGrid& grid, Pred&& pred,
               const char* fill, const char* cls) {
    for (int r = 0; r < grid.height(); ++r) {
        int start = -1;
        for (int c = 0; c <= grid.width(); ++c) {
            const bool on = c < grid.width() && pred(r, c);
            if (on && start < 0) start = c;
            if (!on && start >= 0) {
                out << "<rect class=\"" << cls << "\" x=\"" << start * kScale << "\" y=\""
                    << r * kScale << "\" width=\"" << (c - start) * kScale
                    << "\" height=\"" << kScale << "\" fill=\"" << fill << "\"/>\n";
                start = -1;
            }
        }
    }
}

}  // namespace

std::string render_svg(const RenderModel& model, const SvgLayers& layers) {
    if (!model.grid) throw std::invalid_argument("render_svg: missing grid");
    const OccupancyGrid& grid = *model.grid;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << grid.width() * kScale
        << "\" height=\"" << grid.height() * kScale << "\" viewBox=\"0 0 "
        << grid.width() * kScale << " " << grid.height() * kScale << "\">\n";

    if (layers.grid) {
        out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
        emit_runs(out, grid, [&](int r, int c) { return grid.at(r, c) == Cell::Occupied; },
                  "#000000", "occupied");
        emit_runs(out, grid, [&](int r, int c) { return grid.at(r, c) == Cell::Unknown; },
                  "#9e9e9e", "unknown");
    }

    if (layers.covered && model.covered) {
        const FreeIndexer indexer(grid);
        emit_runs(out, grid,
                  [&](int r, int c) {
                      const std::int32_t id = indexer.id_of(r, c);
                      return id >= 0 && model.covered->test(id);
                  },
                  "#ffe082", "covered");
    }

    if (layers.path) {
        for (const auto& leg : model.polylines) {
            if (leg.empty()) continue;
            out << "<polyline class=\"path\" fill=\"none\" stroke=\"#2e7d32\" stroke-width=\""
                << fmt(kScale * 0.5) << "\" points=\"";
            for (std::size_t i = 0; i < leg.size(); ++i) {
                if (i) out << ' ';
                out << fmt((leg[i].col + 0.5) * kScale) << ','
                    << fmt((leg[i].row + 0.5) * kScale);
            }
            out << "\"/>\n";
        }
    }

    if (layers.viewpoints) {
        for (const CellIndex& c : model.viewpoint_cells)
            out << "<circle class=\"viewpoint\" cx=\"" << fmt((c.col + 0.5) * kScale)
                << "\" cy=\"" << fmt((c.row + 0.5) * kScale) << "\" r=\"" << fmt(kScale * 1.2)
                << "\" fill=\"#e53935\"/>\n";
    }

    if (layers.steiner) {
        for (const CellIndex& c : model.steiner_cells)
            out << "<circle class=\"steiner\" cx=\"" << fmt((c.col + 0.5) * kScale)
                << "\" cy=\"" << fmt((c.row + 0.5) * kScale) << "\" r=\"" << fmt(kScale * 1.2)
                << "\" fill=\"#fdd835\"/>\n";
    }

    out << "</svg>\n";
    return out.str();
}

}  // namespace scanplan
