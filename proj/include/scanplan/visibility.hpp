#pragma once

#include <cstdint>
#include <vector>

#include "scanplan/bitset.hpp"
#include "scanplan/grid.hpp"

namespace scanplan {

// Dense ids for the Free cells of one grid, so visible sets and coverage
// masks can live in bitsets.
class FreeIndexer {
public:
    explicit FreeIndexer(const OccupancyGrid& grid);

    std::int64_t free_count() const { return static_cast<std::int64_t>(cells_.size()); }
    std::int32_t id_of(int row, int col) const { return ids_[grid_idx(row, col)]; }
    std::int32_t id_of(CellIndex c) const { return id_of(c.row, c.col); }
    CellIndex cell_of(std::int32_t id) const { return cells_[id]; }

private:
    std::size_t grid_idx(int row, int col) const {
        return static_cast<std::size_t>(row) * width_ + col;
    }
    int width_ = 0;
    std::vector<std::int32_t> ids_;   // per grid cell, -1 when not free
    std::vector<CellIndex> cells_;    // id -> cell
};

// S_i of one source cell: every free cell the source sees within range,
// plus the traced boundary of that set.
struct VisibleSet {
    CellIndex source;
    Bitset cells;                    // over FreeIndexer ids
    std::vector<CellIndex> contour;  // ordered boundary cells
};

struct CoverageMask {
    Bitset covered;  // over FreeIndexer ids
    std::int64_t covered_count = 0;
    std::int64_t free_count = 0;
};

// Line-of-sight between cell centers: center distance <= r and every cell the
// segment touches is Free. Symmetric in a and b. Both must be Free.
bool is_visible(const OccupancyGrid& grid, CellIndex a, CellIndex b, double r);

// Collision check only (no range gate): the supercover segment between the
// two cell centers stays in Free cells.
bool segment_collision_free(const OccupancyGrid& grid, CellIndex a, CellIndex b);

// All free cells visible from `source` within range r, with traced contour.
VisibleSet visible_set(const OccupancyGrid& grid, const FreeIndexer& indexer,
                       CellIndex source, double r);

// |visible_set(source, r)| without materializing the set.
std::int64_t visible_count(const OccupancyGrid& grid, CellIndex source, double r);

// Number of cells visible from `source` that are not yet covered.
std::int64_t marginal_visible_count(const OccupancyGrid& grid, const FreeIndexer& indexer,
                                    CellIndex source, double r, const Bitset& covered);

// Boundary cells of an arbitrary free-cell set: members with at least one
// 4-neighbor outside the set, ordered by clockwise Moore-neighbor tracing
// starting from the lexicographically smallest boundary cell. Sets with
// several boundary loops (holes, disconnected blobs) are traced loop by loop
// in lexicographic seed order.
std::vector<CellIndex> trace_contour(const OccupancyGrid& grid, const FreeIndexer& indexer,
                                     const Bitset& cells);

// Contour of a visible set (same cells as set.contour).
std::vector<CellIndex> contour(const OccupancyGrid& grid, const FreeIndexer& indexer,
                               const VisibleSet& set);

// Same cell set as trace_contour but in plain row-major order; used where only
// membership matters (greedy candidate pool).
std::vector<CellIndex> boundary_cells(const OccupancyGrid& grid, const FreeIndexer& indexer,
                                      const Bitset& cells);

double coverage_fraction(const CoverageMask& mask);

}  // namespace scanplan
