#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace scanplan {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

struct CellIndex {
    int row = 0;
    int col = 0;

    bool operator==(const CellIndex& o) const { return row == o.row && col == o.col; }
    bool operator!=(const CellIndex& o) const { return !(*this == o); }
    // Lexicographic (row, col): equals row-major order on a fixed-width grid.
    bool operator<(const CellIndex& o) const {
        return row != o.row ? row < o.row : col < o.col;
    }
};

// Visits every cell the closed segment between the centers of a and b touches
// (supercover rasterization). When the segment passes exactly through a cell
// corner, all cells meeting at that corner are visited. The visitor receives
// (row, col) and returns false to stop early; the function then returns false.
template <class Visit>
bool supercover_line(CellIndex a, CellIndex b, Visit&& visit) {
    int x = a.col, y = a.row;
    int dx = b.col - a.col, dy = b.row - a.row;
    int xstep = 1, ystep = 1;
    if (dx < 0) { xstep = -1; dx = -dx; }
    if (dy < 0) { ystep = -1; dy = -dy; }
    const int ddx = 2 * dx, ddy = 2 * dy;

    if (!visit(y, x)) return false;

    if (ddx >= ddy) {  // mostly horizontal
        int error = dx, errorprev = dx;
        for (int i = 0; i < dx; ++i) {
            x += xstep;
            error += ddy;
            if (error > ddx) {
                y += ystep;
                error -= ddx;
                if (error + errorprev < ddx) {
                    if (!visit(y - ystep, x)) return false;
                } else if (error + errorprev > ddx) {
                    if (!visit(y, x - xstep)) return false;
                } else {  // exact corner crossing: both side cells block
                    if (!visit(y - ystep, x)) return false;
                    if (!visit(y, x - xstep)) return false;
                }
            }
            if (!visit(y, x)) return false;
            errorprev = error;
        }
    } else {  // mostly vertical
        int error = dy, errorprev = dy;
        for (int i = 0; i < dy; ++i) {
            y += ystep;
            error += ddx;
            if (error > ddy) {
                x += xstep;
                error -= ddy;
                if (error + errorprev < ddy) {
                    if (!visit(y, x - xstep)) return false;
                } else if (error + errorprev > ddy) {
                    if (!visit(y - ystep, x)) return false;
                } else {
                    if (!visit(y, x - xstep)) return false;
                    if (!visit(y - ystep, x)) return false;
                }
            }
            if (!visit(y, x)) return false;
            errorprev = error;
        }
    }
    return true;
}

}  // namespace scanplan
