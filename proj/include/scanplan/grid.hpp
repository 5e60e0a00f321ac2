#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "scanplan/geometry.hpp"

namespace scanplan {

enum class Cell : std::uint8_t { Free = 0, Occupied = 1, Unknown = 2 };

// 2D occupancy grid. Row 0 / col 0 sit at the world origin; cell centers are
// at origin + ((col + 0.5) * res, (row + 0.5) * res). Unknown cells are
// non-free and non-traversable everywhere in the planner.
class OccupancyGrid {
public:
    static constexpr double kDefaultResolution = 0.05;  // m/cell

    OccupancyGrid() = default;
    OccupancyGrid(int width, int height, double resolution,
                  Vec2 origin = {0.0, 0.0}, double origin_theta = 0.0,
                  Cell fill = Cell::Free);

    int width() const { return width_; }
    int height() const { return height_; }
    double resolution() const { return resolution_; }
    Vec2 origin() const { return origin_; }
    double origin_theta() const { return origin_theta_; }

    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height_ && col >= 0 && col < width_;
    }
    bool in_bounds(CellIndex c) const { return in_bounds(c.row, c.col); }

    Cell at(int row, int col) const { return cells_[idx(row, col)]; }
    Cell at(CellIndex c) const { return at(c.row, c.col); }
    void set(int row, int col, Cell v) { cells_[idx(row, col)] = v; }
    void set(CellIndex c, Cell v) { set(c.row, c.col, v); }

    bool is_free(int row, int col) const {
        return in_bounds(row, col) && at(row, col) == Cell::Free;
    }
    bool is_free(CellIndex c) const { return is_free(c.row, c.col); }
    bool is_obstacle(int row, int col) const { return at(row, col) != Cell::Free; }

    std::size_t idx(int row, int col) const {
        return static_cast<std::size_t>(row) * width_ + col;
    }
    CellIndex cell_of_idx(std::size_t i) const {
        return {static_cast<int>(i / width_), static_cast<int>(i % width_)};
    }

    Vec2 cell_center(CellIndex c) const {
        return {origin_.x + (c.col + 0.5) * resolution_,
                origin_.y + (c.row + 0.5) * resolution_};
    }
    // Cell whose square contains the world point (clamped to bounds).
    CellIndex cell_at_world(Vec2 p) const;

    std::int64_t count(Cell v) const;
    std::int64_t free_count() const { return count(Cell::Free); }

    const std::vector<Cell>& cells() const { return cells_; }

    // True when (row, col) was turned Occupied by inflate() rather than by the
    // source map. Empty until inflate() has run.
    bool inflated_at(int row, int col) const {
        return !inflated_.empty() && inflated_[idx(row, col)] != 0;
    }
    bool has_inflation_mask() const { return !inflated_.empty(); }

    bool operator==(const OccupancyGrid& o) const;

    friend OccupancyGrid inflate(const OccupancyGrid& grid, double radius_m);

private:
    int width_ = 0;
    int height_ = 0;
    double resolution_ = kDefaultResolution;
    Vec2 origin_{0.0, 0.0};
    double origin_theta_ = 0.0;
    std::vector<Cell> cells_;
    std::vector<std::uint8_t> inflated_;  // parallel mask, set by inflate()
};

// Exact Euclidean distance (between cell centers) from every cell to the
// nearest Occupied/Unknown cell. Stored squared in cell units so comparisons
// are integer-exact; meters() converts.
struct ObstacleDistanceField {
    int width = 0;
    int height = 0;
    double resolution = 0.0;
    bool has_obstacles = false;
    std::vector<std::int64_t> dist2;  // squared distance in cell units

    double meters(int row, int col) const {
        if (!has_obstacles) return std::numeric_limits<double>::infinity();
        return std::sqrt(static_cast<double>(dist2[static_cast<std::size_t>(row) * width + col])) *
               resolution;
    }
    double meters(CellIndex c) const { return meters(c.row, c.col); }
};

// Grows obstacles by `radius_m`: every Free cell whose center lies within the
// radius of a hard (non-inflated) Occupied/Unknown cell center becomes
// Occupied. Distances are measured against the hard obstacle set, so the
// operation is idempotent for a fixed radius while the inflation mask is
// carried along in memory.
OccupancyGrid inflate(const OccupancyGrid& grid, double radius_m);

ObstacleDistanceField distance_field(const OccupancyGrid& grid);

// 4-connected components of the Free cells.
struct FreeComponents {
    std::vector<std::int32_t> label;  // per cell, -1 for non-free
    int count = 0;
    std::vector<std::int64_t> sizes;
    int largest() const;
};

FreeComponents free_components(const OccupancyGrid& grid);

}  // namespace scanplan
