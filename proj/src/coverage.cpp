#include "scanplan/coverage.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "scanplan/parallel.hpp"

namespace scanplan {

double viewpoint_score(std::int64_t setsize, std::int64_t maxsize,
                       double obstacle_distance_m) {
    if (maxsize <= 0) throw std::invalid_argument("viewpoint_score: maxsize must be > 0");
    if (setsize < 0 || setsize > maxsize)
        throw std::invalid_argument("viewpoint_score: setsize out of range");
    if (obstacle_distance_m < 0.0)
        throw std::invalid_argument("viewpoint_score: negative obstacle distance");
    return static_cast<double>(setsize) / static_cast<double>(maxsize) -
           std::exp(-obstacle_distance_m);
}

namespace {

std::vector<CellIndex> universe_candidates(const OccupancyGrid& grid,
                                           const FreeIndexer& indexer,
                                           const CoverageOptions& opts) {
    std::vector<CellIndex> cands;
    if (indexer.free_count() <= opts.exact_universe_limit) {
        cands.reserve(indexer.free_count());
        for (std::int32_t id = 0; id < indexer.free_count(); ++id)
            cands.push_back(indexer.cell_of(id));
        return cands;
    }
    const int stride = std::max(1, opts.candidate_stride);
    for (int r = 0; r < grid.height(); r += stride)
        for (int c = 0; c < grid.width(); c += stride)
            if (grid.at(r, c) == Cell::Free) cands.push_back({r, c});
    if (cands.empty()) {  // lattice missed all free cells; fall back to exact
        for (std::int32_t id = 0; id < indexer.free_count(); ++id)
            cands.push_back(indexer.cell_of(id));
    }
    return cands;
}

}  // namespace

std::pair<CellIndex, VisibleSet> select_initial(const OccupancyGrid& grid,
                                                const FreeIndexer& indexer, double r,
                                                const CoverageOptions& opts) {
    if (indexer.free_count() == 0)
        throw std::invalid_argument("select_initial: grid has no free cells");
    const std::vector<CellIndex> cands = universe_candidates(grid, indexer, opts);
    std::vector<std::int64_t> counts(cands.size());
    parallel_for(static_cast<std::int64_t>(cands.size()), [&](std::int64_t i) {
        counts[i] = visible_count(grid, cands[i], r);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < cands.size(); ++i)
        if (counts[i] > counts[best]) best = i;  // candidates are row-major ordered
    return {cands[best], visible_set(grid, indexer, cands[best], r)};
}

ViewpointSet greedy_cover(const OccupancyGrid& grid, double r, double target,
                          const CoverageOptions& opts, GreedyTimings* timings) {
    if (!(target > 0.0 && target <= 1.0))
        throw std::invalid_argument("greedy_cover: target must be in (0, 1]");

    const FreeIndexer indexer(grid);
    if (indexer.free_count() == 0)
        throw std::invalid_argument("greedy_cover: grid has no free cells");
    const ObstacleDistanceField df = distance_field(grid);

    ViewpointSet out;
    out.r = r;
    out.mask.covered = Bitset(indexer.free_count());
    out.mask.free_count = indexer.free_count();

    const auto t_universe = std::chrono::steady_clock::now();
    auto [x0, s0] = select_initial(grid, indexer, r, opts);
    if (timings)
        timings->universe_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_universe)
                .count();
    const auto t_loop = std::chrono::steady_clock::now();

    const FreeComponents comps = free_components(grid);
    const std::int32_t home = comps.label[grid.idx(x0.row, x0.col)];
    out.reachable_free_count = comps.sizes[home];
    out.unreachable_free = out.reachable_free_count < indexer.free_count();

    auto obstacle_distance = [&](CellIndex c) { return df.meters(c); };

    auto accept = [&](CellIndex cell, VisibleSet&& vs, double sc, bool fallback) {
        SelectedViewpoint sel;
        sel.cell = cell;
        sel.newly_covered = vs.cells.count_minus(out.mask.covered);
        sel.score_at_selection = sc;
        sel.from_fallback = fallback;
        sel.visible = std::move(vs);
        out.mask.covered |= sel.visible.cells;
        out.mask.covered_count = out.mask.covered.count();
        out.viewpoints.push_back(std::move(sel));
    };

    {
        const std::int64_t n0 = s0.cells.count();
        const double sc0 = viewpoint_score(n0, n0, obstacle_distance(x0));
        accept(x0, std::move(s0), sc0, false);
    }

    const double eps = 1e-12;
    while (true) {
        const double reachable_frac =
            static_cast<double>(out.mask.covered_count) / out.reachable_free_count;
        if (reachable_frac >= target - eps) break;

        // Candidate pool: contour cells of the covered union (row-major order
        // so the argmax tie-break lands on the smallest index).
        std::vector<CellIndex> pool = boundary_cells(grid, indexer, out.mask.covered);
        std::vector<std::int64_t> gain(pool.size(), 0);
        parallel_for(static_cast<std::int64_t>(pool.size()), [&](std::int64_t i) {
            gain[i] = marginal_visible_count(grid, indexer, pool[i], r, out.mask.covered);
        });
        std::int64_t max_gain = 0;
        for (std::int64_t g : gain) max_gain = std::max(max_gain, g);

        if (max_gain > 0) {
            // Zero-gain contour cells cannot advance coverage; scoring them
            // could stall the loop, so they drop out of the pool.
            std::size_t best = pool.size();
            double best_score = 0.0;
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (gain[i] == 0) continue;
                const double sc =
                    static_cast<double>(gain[i]) / static_cast<double>(max_gain) -
                    std::exp(-obstacle_distance(pool[i]));
                if (best == pool.size() || sc > best_score) { best = i; best_score = sc; }
            }
            accept(pool[best], visible_set(grid, indexer, pool[best], r), best_score,
                   false);
            continue;
        }

        // No contour candidate adds coverage (pinched geometry). Jump to the
        // uncovered reachable cell with the best marginal gain.
        std::vector<CellIndex> orphan;
        for (std::int32_t id = 0; id < indexer.free_count(); ++id) {
            if (out.mask.covered.test(id)) continue;
            CellIndex c = indexer.cell_of(id);
            if (comps.label[grid.idx(c.row, c.col)] == home) orphan.push_back(c);
        }
        if (orphan.empty()) break;  // nothing reachable remains; partial result

        std::vector<std::int64_t> ogain(orphan.size(), 0);
        parallel_for(static_cast<std::int64_t>(orphan.size()), [&](std::int64_t i) {
            ogain[i] = marginal_visible_count(grid, indexer, orphan[i], r, out.mask.covered);
        });
        std::int64_t omax = 0;
        for (std::int64_t g : ogain) omax = std::max(omax, g);
        std::size_t best = orphan.size();
        double best_score = 0.0;
        for (std::size_t i = 0; i < orphan.size(); ++i) {
            const double sc = static_cast<double>(ogain[i]) / static_cast<double>(omax) -
                              std::exp(-obstacle_distance(orphan[i]));
            if (best == orphan.size() || sc > best_score) { best = i; best_score = sc; }
        }
        out.fallback_used = true;
        accept(orphan[best], visible_set(grid, indexer, orphan[best], r), best_score, true);
    }
    if (timings)
        timings->loop_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_loop).count();
    return out;
}

}  // namespace scanplan
