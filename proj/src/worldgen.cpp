#include "scanplan/worldgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace scanplan {

namespace {

// Thin wrapper so bounded draws do not depend on std::uniform_int_distribution
// internals (which vary across standard libraries).
struct Rng {
    explicit Rng(std::uint32_t seed) : eng(seed) {}
    int uniform(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(eng() % static_cast<std::uint32_t>(hi - lo + 1));
    }
    std::mt19937 eng;
};

void fill_rect(OccupancyGrid& g, int r0, int c0, int r1, int c1, Cell v) {
    for (int r = std::max(0, r0); r <= std::min(g.height() - 1, r1); ++r)
        for (int c = std::max(0, c0); c <= std::min(g.width() - 1, c1); ++c)
            g.set(r, c, v);
}

[[noreturn]] void too_small(const std::string& name) {
    throw std::invalid_argument("world dimensions too small for recipe '" + name + "'");
}

// Recipe width/height describe the free interior; the border wall wraps
// around it, so the grid is (width+2) x (height+2). Interior cells are
// rows/cols 1..height / 1..width.
OccupancyGrid make_empty(const WorldRecipe& rec) {
    if (rec.width < 1 || rec.height < 1) too_small(rec.name);
    OccupancyGrid g(rec.width + 2, rec.height + 2, rec.resolution);
    fill_rect(g, 0, 0, 0, g.width() - 1, Cell::Occupied);
    fill_rect(g, g.height() - 1, 0, g.height() - 1, g.width() - 1, Cell::Occupied);
    fill_rect(g, 0, 0, g.height() - 1, 0, Cell::Occupied);
    fill_rect(g, 0, g.width() - 1, g.height() - 1, g.width() - 1, Cell::Occupied);
    return g;
}

OccupancyGrid make_corridor(const WorldRecipe& rec) {
    OccupancyGrid g = make_empty(rec);
    const int cw = std::max(2, static_cast<int>(std::lround(rec.corridor_width / rec.resolution)));
    // Serpentine along the longer axis: partition walls with alternating gaps.
    const bool wide = rec.width >= rec.height;
    const int long_len = wide ? rec.width : rec.height;
    const int short_len = wide ? rec.height : rec.width;
    if (short_len < cw || long_len < cw) too_small(rec.name);
    int wall_index = 0;
    for (int pos = 1 + cw; pos + cw <= long_len; pos += cw + 1) {
        ++wall_index;
        const bool gap_low = wall_index % 2 == 1;
        const int gap = std::min(cw, short_len);
        for (int t = 1; t <= short_len; ++t) {
            const bool in_gap = gap_low ? t <= gap : t > short_len - gap;
            if (in_gap) continue;
            if (wide)
                g.set(t, pos, Cell::Occupied);
            else
                g.set(pos, t, Cell::Occupied);
        }
    }
    return g;
}

OccupancyGrid make_loop(const WorldRecipe& rec) {
    const int cw = std::max(2, static_cast<int>(std::lround(rec.corridor_width / rec.resolution)));
    if (rec.width < 2 * cw + 3 || rec.height < 2 * cw + 3) too_small(rec.name);
    OccupancyGrid g = make_empty(rec);
    fill_rect(g, 1 + cw, 1 + cw, rec.height - cw, rec.width - cw, Cell::Occupied);
    return g;
}

struct Door {
    bool vertical;  // wall orientation
    int wall_pos;   // wall column (vertical) or row (horizontal)
    int start;      // first door cell along the wall
    int len;
};

void split_region(Rng& rng, OccupancyGrid& g, std::vector<Door>& doors, int r0, int c0,
                  int r1, int c1, int min_room, int door_len) {
    const int w = c1 - c0 + 1, h = r1 - r0 + 1;
    const bool can_v = w >= 2 * min_room + 1;
    const bool can_h = h >= 2 * min_room + 1;
    if (!can_v && !can_h) return;
    const bool vertical = can_v && (!can_h || w >= h);
    if (vertical) {
        const int col = rng.uniform(c0 + min_room, c1 - min_room);
        for (int r = r0; r <= r1; ++r) g.set(r, col, Cell::Occupied);
        const int dlen = std::min(door_len, h);
        const int dstart = rng.uniform(r0, r1 - dlen + 1);
        doors.push_back({true, col, dstart, dlen});
        split_region(rng, g, doors, r0, c0, r1, col - 1, min_room, door_len);
        split_region(rng, g, doors, r0, col + 1, r1, c1, min_room, door_len);
    } else {
        const int row = rng.uniform(r0 + min_room, r1 - min_room);
        for (int c = c0; c <= c1; ++c) g.set(row, c, Cell::Occupied);
        const int dlen = std::min(door_len, w);
        const int dstart = rng.uniform(c0, c1 - dlen + 1);
        doors.push_back({false, row, dstart, dlen});
        split_region(rng, g, doors, r0, c0, row - 1, c1, min_room, door_len);
        split_region(rng, g, doors, row + 1, c0, r1, c1, min_room, door_len);
    }
}

OccupancyGrid make_rooms(const WorldRecipe& rec) {
    const int min_room = std::max(4, static_cast<int>(std::lround(rec.min_room / rec.resolution)));
    const int door_len = std::max(2, static_cast<int>(std::lround(rec.door_width / rec.resolution)));
    if (std::max(rec.width, rec.height) < 2 * min_room + 1) too_small(rec.name);
    OccupancyGrid g = make_empty(rec);
    Rng rng(rec.seed);
    std::vector<Door> doors;
    split_region(rng, g, doors, 1, 1, rec.height, rec.width, min_room, door_len);
    // Doors are carved after all walls exist, so later walls cannot seal one.
    for (const Door& d : doors) {
        for (int t = d.start; t < d.start + d.len; ++t) {
            if (d.vertical)
                g.set(t, d.wall_pos, Cell::Free);
            else
                g.set(d.wall_pos, t, Cell::Free);
        }
    }
    return g;
}

OccupancyGrid make_random_obstacles(const WorldRecipe& rec) {
    if (rec.width < 6 || rec.height < 6) too_small(rec.name);
    OccupancyGrid g = make_empty(rec);
    Rng rng(rec.seed);
    const int n = std::max(3, rec.width * rec.height / 300);
    const int max_side = std::max(3, std::min(rec.width, rec.height) / 6);
    for (int i = 0; i < n; ++i) {
        const int h = rng.uniform(2, max_side);
        const int w = rng.uniform(2, max_side);
        const int r = rng.uniform(1, std::max(1, rec.height + 1 - h));
        const int c = rng.uniform(1, std::max(1, rec.width + 1 - w));
        fill_rect(g, r, c, r + h - 1, c + w - 1, Cell::Occupied);
    }
    // Keep the largest free component; fill stray pockets.
    FreeComponents comps = free_components(g);
    if (comps.count == 0) too_small(rec.name);
    const int keep = comps.largest();
    for (int r = 0; r < g.height(); ++r)
        for (int c = 0; c < g.width(); ++c)
            if (g.at(r, c) == Cell::Free && comps.label[g.idx(r, c)] != keep)
                g.set(r, c, Cell::Occupied);
    return g;
}

}  // namespace

OccupancyGrid generate_world(const WorldRecipe& rec) {
    if (!(rec.resolution > 0.0))
        throw std::invalid_argument("world resolution must be positive");
    OccupancyGrid g = [&] {
        if (rec.name == "empty") return make_empty(rec);
        if (rec.name == "corridor") return make_corridor(rec);
        if (rec.name == "rooms") return make_rooms(rec);
        if (rec.name == "loop") return make_loop(rec);
        if (rec.name == "random-obstacles") return make_random_obstacles(rec);
        throw std::invalid_argument("unknown world recipe '" + rec.name + "'");
    }();
    // Every recipe must deliver one 4-connected free component.
    FreeComponents comps = free_components(g);
    if (comps.count != 1)
        throw std::logic_error("world recipe '" + rec.name + "' produced " +
                               std::to_string(comps.count) + " free components");
    return g;
}

}  // namespace scanplan
