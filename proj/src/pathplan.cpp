#include "scanplan/pathplan.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "scanplan/errors.hpp"

namespace scanplan {

namespace {

constexpr int kDr[8] = {-1, 1, 0, 0, -1, -1, 1, 1};
constexpr int kDc[8] = {0, 0, -1, 1, -1, 1, -1, 1};

const double kSqrt2 = std::sqrt(2.0);

}  // namespace

std::optional<GridPath> astar(const OccupancyGrid& grid, CellIndex from, CellIndex to) {
    if (!grid.is_free(from) || !grid.is_free(to))
        throw std::invalid_argument("astar endpoints must be Free cells");

    const double res = grid.resolution();
    auto octile = [&](int r, int c) {
        const double dr = std::abs(r - to.row), dc = std::abs(c - to.col);
        return res * (std::max(dr, dc) + (kSqrt2 - 1.0) * std::min(dr, dc));
    };

    const std::size_t n = static_cast<std::size_t>(grid.width()) * grid.height();
    std::vector<double> g(n, std::numeric_limits<double>::infinity());
    std::vector<std::int32_t> parent(n, -1);
    std::vector<char> closed(n, 0);

    // f, then h, then cell index: deterministic pops.
    using Item = std::tuple<double, double, std::int64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> open;

    const std::size_t src = grid.idx(from.row, from.col);
    const std::size_t dst = grid.idx(to.row, to.col);
    g[src] = 0.0;
    open.push({octile(from.row, from.col), octile(from.row, from.col),
               static_cast<std::int64_t>(src)});

    while (!open.empty()) {
        const auto [f, h, idx] = open.top();
        open.pop();
        const std::size_t u = static_cast<std::size_t>(idx);
        if (closed[u]) continue;
        closed[u] = 1;
        if (u == dst) break;
        const int ur = static_cast<int>(u) / grid.width();
        const int uc = static_cast<int>(u) % grid.width();
        for (int k = 0; k < 8; ++k) {
            const int vr = ur + kDr[k], vc = uc + kDc[k];
            if (!grid.is_free(vr, vc)) continue;
            if (k >= 4 && !grid.is_free(ur + kDr[k], uc) && !grid.is_free(ur, uc + kDc[k]))
                continue;  // both orthogonal neighbors blocked: no corner cutting
            const std::size_t v = grid.idx(vr, vc);
            if (closed[v]) continue;
            const double step = (k < 4 ? res : res * kSqrt2);
            const double ng = g[u] + step;
            if (ng < g[v]) {
                g[v] = ng;
                parent[v] = static_cast<std::int32_t>(u);
                const double nh = octile(vr, vc);
                open.push({ng + nh, nh, static_cast<std::int64_t>(v)});
            }
        }
    }

    if (!closed[dst]) return std::nullopt;

    GridPath path;
    for (std::int64_t cur = static_cast<std::int64_t>(dst); cur != -1; cur = parent[cur])
        path.cells.push_back(grid.cell_of_idx(static_cast<std::size_t>(cur)));
    std::reverse(path.cells.begin(), path.cells.end());

    // Recount steps so the reported length is the exact step-metric sum.
    int orth = 0, diag = 0;
    for (std::size_t i = 0; i + 1 < path.cells.size(); ++i) {
        const CellIndex& a = path.cells[i];
        const CellIndex& b = path.cells[i + 1];
        (a.row != b.row && a.col != b.col) ? ++diag : ++orth;
    }
    path.length = orth * res + diag * (res * kSqrt2);
    return path;
}

double tour_path_length(const OccupancyGrid& grid, const Tour& tour,
                        std::vector<GridPath>* legs) {
    double total = 0.0;
    if (legs) legs->clear();
    for (std::size_t k = 0; k + 1 < tour.sequence.size(); ++k) {
        const CellIndex a = tour.nodes[tour.sequence[k]].cell;
        const CellIndex b = tour.nodes[tour.sequence[k + 1]].cell;
        std::optional<GridPath> leg = astar(grid, a, b);
        if (!leg)
            throw PlanningError("path planning",
                                "tour leg " + std::to_string(k) + " (node " +
                                    std::to_string(tour.sequence[k]) + " -> node " +
                                    std::to_string(tour.sequence[k + 1]) +
                                    ") is disconnected");
        total += leg->length;
        if (legs) legs->push_back(std::move(*leg));
    }
    return total;
}

}  // namespace scanplan
