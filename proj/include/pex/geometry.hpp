#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <functional>

namespace pex {

// World coordinates in meters.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend bool operator==(Vec2, Vec2) = default;

  double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

// Integer cell coordinates. Ordering is (row, col) so sorted containers of
// cells read in raster order.
struct Cell {
  int col = 0;
  int row = 0;

  friend bool operator==(Cell, Cell) = default;
  friend std::strong_ordering operator<=>(Cell a, Cell b) {
    if (auto c = a.row <=> b.row; c != 0) return c;
    return a.col <=> b.col;
  }
};

inline int chebyshev(Cell a, Cell b) {
  const int dc = a.col > b.col ? a.col - b.col : b.col - a.col;
  const int dr = a.row > b.row ? a.row - b.row : b.row - a.row;
  return dc > dr ? dc : dr;
}

}  // namespace pex

template <>
struct std::hash<pex::Cell> {
  std::size_t operator()(pex::Cell c) const noexcept {
    return std::hash<long long>{}((static_cast<long long>(c.row) << 32) ^
                                  static_cast<unsigned int>(c.col));
  }
};
