#include "scanplan/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "scanplan/geometry.hpp"

namespace scanplan {

FreeIndexer::FreeIndexer(const OccupancyGrid& grid) : width_(grid.width()) {
    ids_.assign(static_cast<std::size_t>(grid.width()) * grid.height(), -1);
    for (int r = 0; r < grid.height(); ++r)
        for (int c = 0; c < grid.width(); ++c)
            if (grid.at(r, c) == Cell::Free) {
                ids_[grid_idx(r, c)] = static_cast<std::int32_t>(cells_.size());
                cells_.push_back({r, c});
            }
}

namespace {

// Squared range bound in cell units. The slack absorbs the rounding of
// r / resolution so cells at exactly range r stay inside, matching the
// metric <= of the visibility condition (squared cell distances are
// integers, so anything farther is at least 1 away).
inline double range_bound_cells2(double r, double resolution) {
    const double rc = r / resolution;
    return rc * rc + 1e-9;
}

inline bool within_range(CellIndex a, CellIndex b, double r_cells2) {
    const double dr = a.row - b.row, dc = a.col - b.col;
    return dr * dr + dc * dc <= r_cells2;
}

inline bool segment_free(const OccupancyGrid& grid, CellIndex a, CellIndex b) {
    return supercover_line(a, b, [&grid](int row, int col) {
        return grid.in_bounds(row, col) && grid.at(row, col) == Cell::Free;
    });
}

}  // namespace

bool is_visible(const OccupancyGrid& grid, CellIndex a, CellIndex b, double r) {
    if (!grid.is_free(a) || !grid.is_free(b))
        throw std::invalid_argument("is_visible endpoints must be Free cells");
    if (!within_range(a, b, range_bound_cells2(r, grid.resolution()))) return false;
    return segment_free(grid, a, b);
}

bool segment_collision_free(const OccupancyGrid& grid, CellIndex a, CellIndex b) {
    return segment_free(grid, a, b);
}

namespace {

template <class Fn>
void for_each_visible(const OccupancyGrid& grid, CellIndex source, double r, Fn&& fn) {
    const double rc2 = range_bound_cells2(r, grid.resolution());
    const int reach = static_cast<int>(std::floor(std::sqrt(rc2)));
    const int r0 = std::max(0, source.row - reach);
    const int r1 = std::min(grid.height() - 1, source.row + reach);
    const int c0 = std::max(0, source.col - reach);
    const int c1 = std::min(grid.width() - 1, source.col + reach);
    for (int row = r0; row <= r1; ++row) {
        for (int col = c0; col <= c1; ++col) {
            if (grid.at(row, col) != Cell::Free) continue;
            CellIndex target{row, col};
            if (!within_range(source, target, rc2)) continue;
            if (segment_free(grid, source, target)) fn(target);
        }
    }
}

}  // namespace

VisibleSet visible_set(const OccupancyGrid& grid, const FreeIndexer& indexer,
                       CellIndex source, double r) {
    if (!grid.is_free(source))
        throw std::invalid_argument("visible_set source must be a Free cell");
    VisibleSet out;
    out.source = source;
    out.cells = Bitset(indexer.free_count());
    for_each_visible(grid, source, r,
                     [&](CellIndex c) { out.cells.set(indexer.id_of(c)); });
    out.contour = trace_contour(grid, indexer, out.cells);
    return out;
}

std::int64_t visible_count(const OccupancyGrid& grid, CellIndex source, double r) {
    if (!grid.is_free(source))
        throw std::invalid_argument("visible_count source must be a Free cell");
    std::int64_t n = 0;
    for_each_visible(grid, source, r, [&](CellIndex) { ++n; });
    return n;
}

std::int64_t marginal_visible_count(const OccupancyGrid& grid, const FreeIndexer& indexer,
                                    CellIndex source, double r, const Bitset& covered) {
    const double rc2 = range_bound_cells2(r, grid.resolution());
    const int reach = static_cast<int>(std::floor(std::sqrt(rc2)));
    const int r0 = std::max(0, source.row - reach);
    const int r1 = std::min(grid.height() - 1, source.row + reach);
    const int c0 = std::max(0, source.col - reach);
    const int c1 = std::min(grid.width() - 1, source.col + reach);
    std::int64_t n = 0;
    for (int row = r0; row <= r1; ++row) {
        for (int col = c0; col <= c1; ++col) {
            if (grid.at(row, col) != Cell::Free) continue;
            const std::int32_t id = indexer.id_of(row, col);
            if (covered.test(id)) continue;  // cheap reject before ray walk
            CellIndex target{row, col};
            if (!within_range(source, target, rc2)) continue;
            if (segment_free(grid, source, target)) ++n;
        }
    }
    return n;
}

namespace {

// Clockwise Moore neighborhood in image coordinates (row down, col right),
// starting East.
constexpr int kMooreDr[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kMooreDc[8] = {1, 1, 0, -1, -1, -1, 0, 1};

struct Membership {
    const OccupancyGrid& grid;
    const FreeIndexer& indexer;
    const Bitset& cells;

    bool inside(int row, int col) const {
        if (!grid.in_bounds(row, col)) return false;
        const std::int32_t id = indexer.id_of(row, col);
        return id >= 0 && cells.test(id);
    }
    bool is_boundary(int row, int col) const {
        if (!inside(row, col)) return false;
        return !inside(row - 1, col) || !inside(row + 1, col) ||
               !inside(row, col - 1) || !inside(row, col + 1);
    }
};

}  // namespace

std::vector<CellIndex> trace_contour(const OccupancyGrid& grid, const FreeIndexer& indexer,
                                     const Bitset& cells) {
    if (cells.count() == 0)
        throw std::invalid_argument("trace_contour: empty cell set");
    Membership m{grid, indexer, cells};

    // Boundary predicate set, in lexicographic (row-major) order.
    std::vector<CellIndex> boundary;
    for (std::int32_t id = 0; id < cells.size(); ++id) {
        if (!cells.test(id)) continue;
        CellIndex c = indexer.cell_of(id);
        if (m.is_boundary(c.row, c.col)) boundary.push_back(c);
    }
    std::sort(boundary.begin(), boundary.end());

    std::vector<CellIndex> out;
    std::set<CellIndex> emitted;
    auto emit = [&](CellIndex c) {
        if (m.is_boundary(c.row, c.col) && emitted.insert(c).second) out.push_back(c);
    };

    std::set<std::pair<CellIndex, int>> seen_states;
    for (const CellIndex& seed : boundary) {
        if (emitted.count(seed)) continue;

        // Backtrack direction: first outside 4-neighbor, scanned W, N, E, S.
        int back = -1;
        const int probes[4] = {4, 6, 0, 2};  // W, N, E, S in Moore indexing
        for (int p : probes) {
            if (!m.inside(seed.row + kMooreDr[p], seed.col + kMooreDc[p])) { back = p; break; }
        }
        emit(seed);
        if (back < 0) continue;  // no outside 4-neighbor: nothing to trace

        CellIndex cur = seed;
        int back_dir = back;
        while (true) {
            if (!seen_states.insert({cur, back_dir}).second) break;
            // Scan clockwise from the backtrack direction.
            int found = -1;
            for (int k = 1; k <= 8; ++k) {
                int dir = (back_dir + k) % 8;
                if (m.inside(cur.row + kMooreDr[dir], cur.col + kMooreDc[dir])) {
                    found = dir;
                    break;
                }
            }
            if (found < 0) break;  // isolated cell
            const int prev = (found + 7) % 8;  // outside neighbor just before
            CellIndex next{cur.row + kMooreDr[found], cur.col + kMooreDc[found]};
            // New backtrack: direction from `next` towards that outside cell.
            CellIndex outside{cur.row + kMooreDr[prev], cur.col + kMooreDc[prev]};
            int nb = -1;
            for (int d = 0; d < 8; ++d) {
                if (next.row + kMooreDr[d] == outside.row &&
                    next.col + kMooreDc[d] == outside.col) {
                    nb = d;
                    break;
                }
            }
            if (nb < 0) nb = (found + 4) % 8;  // fall back to reverse direction
            cur = next;
            back_dir = nb;
            if (cur == seed && back_dir == back) break;  // loop closed
            emit(cur);
        }
    }
    return out;
}

std::vector<CellIndex> contour(const OccupancyGrid& grid, const FreeIndexer& indexer,
                               const VisibleSet& set) {
    return trace_contour(grid, indexer, set.cells);
}

std::vector<CellIndex> boundary_cells(const OccupancyGrid& grid, const FreeIndexer& indexer,
                                      const Bitset& cells) {
    Membership m{grid, indexer, cells};
    std::vector<CellIndex> out;
    for (std::int32_t id = 0; id < cells.size(); ++id) {
        if (!cells.test(id)) continue;
        CellIndex c = indexer.cell_of(id);
        if (m.is_boundary(c.row, c.col)) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double coverage_fraction(const CoverageMask& mask) {
    if (mask.free_count <= 0)
        throw std::invalid_argument("coverage_fraction: free_count must be positive");
    return static_cast<double>(mask.covered_count) / static_cast<double>(mask.free_count);
}

}  // namespace scanplan
