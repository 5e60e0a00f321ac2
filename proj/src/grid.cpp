#include "scanplan/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace scanplan {

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, Vec2 origin,
                             double origin_theta, Cell fill)
    : width_(width), height_(height), resolution_(resolution), origin_(origin),
      origin_theta_(origin_theta),
      cells_(static_cast<std::size_t>(width) * height, fill) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("grid dimensions must be positive");
    if (!(resolution > 0.0))
        throw std::invalid_argument("grid resolution must be positive");
}

CellIndex OccupancyGrid::cell_at_world(Vec2 p) const {
    int col = static_cast<int>(std::floor((p.x - origin_.x) / resolution_));
    int row = static_cast<int>(std::floor((p.y - origin_.y) / resolution_));
    col = std::clamp(col, 0, width_ - 1);
    row = std::clamp(row, 0, height_ - 1);
    return {row, col};
}

std::int64_t OccupancyGrid::count(Cell v) const {
    return std::count(cells_.begin(), cells_.end(), v);
}

bool OccupancyGrid::operator==(const OccupancyGrid& o) const {
    return width_ == o.width_ && height_ == o.height_ && resolution_ == o.resolution_ &&
           origin_ == o.origin_ && origin_theta_ == o.origin_theta_ && cells_ == o.cells_;
}

namespace {

constexpr std::int64_t kFar = std::numeric_limits<std::int64_t>::max() / 4;

// 1D squared distance transform (lower envelope of parabolas).
void edt_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& d,
            std::vector<int>& v, std::vector<double>& z, int n) {
    bool any_site = false;
    for (int q = 0; q < n; ++q)
        if (f[q] < kFar) { any_site = true; break; }
    if (!any_site) {
        std::fill(d.begin(), d.begin() + n, kFar);
        return;
    }

    auto intersect = [&f](int q, int p) {
        return (static_cast<double>(f[q] - f[p]) + static_cast<double>(q) * q -
                static_cast<double>(p) * p) /
               (2.0 * (q - p));
    };

    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        if (f[q] >= kFar) continue;
        double s = intersect(q, v[k]);
        while (k > 0 && s <= z[k]) { --k; s = intersect(q, v[k]); }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    // A far-sentinel parabola can only sit at v[0]; its upper boundary z[1]
    // is then hugely negative, so evaluation below never selects it.
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        std::int64_t dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace

OccupancyGrid inflate(const OccupancyGrid& grid, double radius_m) {
    if (radius_m < 0.0) throw std::invalid_argument("inflation radius must be >= 0");

    // Hard obstacles: cells occupied in the source map, not by prior inflation.
    OccupancyGrid hard = grid;
    if (!grid.inflated_.empty()) {
        for (std::size_t i = 0; i < hard.cells_.size(); ++i)
            if (grid.inflated_[i]) hard.cells_[i] = Cell::Free;
    }
    hard.inflated_.clear();

    ObstacleDistanceField df = distance_field(hard);

    OccupancyGrid out = hard;
    out.inflated_.assign(out.cells_.size(), 0);
    if (df.has_obstacles && radius_m > 0.0) {
        // Compare squared distances in cell units to avoid rounding at the rim.
        const double rc = radius_m / grid.resolution();
        const double rc2 = rc * rc;
        for (int r = 0; r < out.height(); ++r) {
            for (int c = 0; c < out.width(); ++c) {
                std::size_t i = out.idx(r, c);
                if (out.cells_[i] == Cell::Free &&
                    static_cast<double>(df.dist2[i]) <= rc2) {
                    out.cells_[i] = Cell::Occupied;
                    out.inflated_[i] = 1;
                }
            }
        }
    }
    return out;
}

ObstacleDistanceField distance_field(const OccupancyGrid& grid) {
    const int w = grid.width(), h = grid.height();
    ObstacleDistanceField out;
    out.width = w;
    out.height = h;
    out.resolution = grid.resolution();
    out.dist2.assign(static_cast<std::size_t>(w) * h, kFar);

    bool any = false;
    // Pass 1: per-column squared distance to nearest obstacle row.
    std::vector<std::int64_t> col_d(static_cast<std::size_t>(w) * h, kFar);
    for (int c = 0; c < w; ++c) {
        int last = -1;
        for (int r = 0; r < h; ++r) {
            if (grid.at(r, c) != Cell::Free) { last = r; any = true; }
            if (last >= 0) {
                std::int64_t d = r - last;
                col_d[grid.idx(r, c)] = d * d;
            }
        }
        last = -1;
        for (int r = h - 1; r >= 0; --r) {
            if (grid.at(r, c) != Cell::Free) last = r;
            if (last >= 0) {
                std::int64_t d = last - r;
                col_d[grid.idx(r, c)] = std::min(col_d[grid.idx(r, c)], d * d);
            }
        }
    }
    out.has_obstacles = any;
    if (!any) return out;

    // Pass 2: lower envelope along each row.
    std::vector<std::int64_t> f(w), d(w);
    std::vector<int> v(w);
    std::vector<double> z(w + 1);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) f[c] = col_d[grid.idx(r, c)];
        edt_1d(f, d, v, z, w);
        for (int c = 0; c < w; ++c) out.dist2[grid.idx(r, c)] = d[c];
    }
    return out;
}

int FreeComponents::largest() const {
    int best = -1;
    std::int64_t best_size = 0;
    for (int i = 0; i < count; ++i)
        if (sizes[i] > best_size) { best_size = sizes[i]; best = i; }
    return best;
}

FreeComponents free_components(const OccupancyGrid& grid) {
    FreeComponents out;
    out.label.assign(static_cast<std::size_t>(grid.width()) * grid.height(), -1);
    std::deque<CellIndex> queue;
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            if (grid.at(r, c) != Cell::Free || out.label[grid.idx(r, c)] >= 0) continue;
            const int id = out.count++;
            out.sizes.push_back(0);
            out.label[grid.idx(r, c)] = id;
            queue.push_back({r, c});
            while (!queue.empty()) {
                CellIndex cur = queue.front();
                queue.pop_front();
                ++out.sizes[id];
                const int dr[4] = {-1, 1, 0, 0};
                const int dc[4] = {0, 0, -1, 1};
                for (int k = 0; k < 4; ++k) {
                    int nr = cur.row + dr[k], nc = cur.col + dc[k];
                    if (!grid.is_free(nr, nc)) continue;
                    std::int32_t& l = out.label[grid.idx(nr, nc)];
                    if (l < 0) { l = id; queue.push_back({nr, nc}); }
                }
            }
        }
    }
    return out;
}

}  // namespace scanplan
