#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pex/error.hpp"
#include "pex/geometry.hpp"

namespace pex {

inline constexpr double kDefaultResolution = 0.05;

// Placement of a grid in the world. `origin` is the world position of the
// lower corner of cell (0,0); cell (c,r) spans
// [origin + (c,r)*resolution, origin + (c+1,r+1)*resolution).
struct GridGeometry {
  int width = 0;
  int height = 0;
  double resolution = kDefaultResolution;
  Vec2 origin;

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

// Dense row-major 2D grid. Value type is the per-cell payload.
template <typename T>
class Grid {
 public:
  Grid() = default;

  Grid(GridGeometry geometry, T fill) : geometry_(geometry) {
    if (geometry.width < 0 || geometry.height < 0) {
      throw Error(ErrorCode::kInvalidArgument, "negative grid dimensions");
    }
    if (!(geometry.resolution > 0.0) || !std::isfinite(geometry.resolution)) {
      throw Error(ErrorCode::kInvalidArgument, "resolution must be > 0");
    }
    cells_.assign(static_cast<std::size_t>(geometry.width) *
                      static_cast<std::size_t>(geometry.height),
                  fill);
  }

  Grid(int width, int height, T fill, double resolution = kDefaultResolution,
       Vec2 origin = {})
      : Grid(GridGeometry{width, height, resolution, origin}, fill) {}

  Grid(GridGeometry geometry, std::vector<T> cells) : Grid(geometry, T{}) {
    if (cells.size() != cells_.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cell count does not match width*height");
    }
    cells_ = std::move(cells);
  }

  int width() const { return geometry_.width; }
  int height() const { return geometry_.height; }
  double resolution() const { return geometry_.resolution; }
  Vec2 origin() const { return geometry_.origin; }
  const GridGeometry& geometry() const { return geometry_; }
  std::size_t size() const { return cells_.size(); }

  bool in_bounds(Cell c) const {
    return c.col >= 0 && c.row >= 0 && c.col < geometry_.width &&
           c.row < geometry_.height;
  }

  std::size_t index_of(Cell c) const {
    return static_cast<std::size_t>(c.row) *
               static_cast<std::size_t>(geometry_.width) +
           static_cast<std::size_t>(c.col);
  }

  Cell cell_at(std::size_t index) const {
    return {static_cast<int>(index % static_cast<std::size_t>(geometry_.width)),
            static_cast<int>(index / static_cast<std::size_t>(geometry_.width))};
  }

  // Unchecked access.
  const T& operator[](Cell c) const { return cells_[index_of(c)]; }
  T& operator[](Cell c) { return cells_[index_of(c)]; }

  const T& at(Cell c) const {
    check(c);
    return cells_[index_of(c)];
  }
  T& at(Cell c) {
    check(c);
    return cells_[index_of(c)];
  }

  std::span<const T> cells() const { return cells_; }
  std::span<T> cells() { return cells_; }

  Cell cell_of(Vec2 p) const {
    return {static_cast<int>(std::floor((p.x - geometry_.origin.x) /
                                        geometry_.resolution)),
            static_cast<int>(std::floor((p.y - geometry_.origin.y) /
                                        geometry_.resolution))};
  }

  Vec2 center_of(Cell c) const {
    return {geometry_.origin.x + (c.col + 0.5) * geometry_.resolution,
            geometry_.origin.y + (c.row + 0.5) * geometry_.resolution};
  }

  template <typename U>
  bool same_geometry(const Grid<U>& other) const {
    return geometry_ == other.geometry();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  void check(Cell c) const {
    if (!in_bounds(c)) {
      throw Error(ErrorCode::kCellOutOfBounds, "cell outside grid");
    }
  }

  GridGeometry geometry_;
  std::vector<T> cells_;
};

enum class CellClass : std::uint8_t { kFree = 0, kUncertain = 1, kObstacle = 2 };

using TrinaryGrid = Grid<CellClass>;
// Per-cell probability of obstacle; 0 is certainly free.
using ProbabilityGrid = Grid<double>;
// Planner traversability (1 = traversable).
using MaskGrid = Grid<std::uint8_t>;

// One-hot three-plane encoding of a trinary grid, each plane row-major with
// values in {0, 255}.
struct ChannelStack {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> free;
  std::vector<std::uint8_t> uncertain;
  std::vector<std::uint8_t> obstacle;

  friend bool operator==(const ChannelStack&, const ChannelStack&) = default;
};

struct Thresholds {
  double tau_free = 0.35;
  double tau_obs = 0.65;
};

inline constexpr double kFusionEpsilon = 1e-4;

ChannelStack encode_channels(const TrinaryGrid& grid);

// Throws kNotOneHot if any cell does not have exactly one plane at 255.
// The result uses default resolution/origin; callers re-attach geometry.
TrinaryGrid decode_channels(const ChannelStack& stack,
                            double resolution = kDefaultResolution,
                            Vec2 origin = {});

TrinaryGrid threshold(const ProbabilityGrid& prob, Thresholds thresholds = {});
CellClass threshold_value(double p, Thresholds thresholds);
void validate_thresholds(Thresholds thresholds);

// Free -> 0, Obstacle -> 1, Uncertain -> 0.5.
ProbabilityGrid lift(const TrinaryGrid& grid);
double lift_value(CellClass c);

// Log-odds sum of two obstacle probabilities. 0.5 is an exact identity.
double fuse_probability(double a, double b);
ProbabilityGrid fuse_bayes(const ProbabilityGrid& a, const ProbabilityGrid& b);

// Throws kInvalidArgument unless every value is finite and in [0,1].
void validate_probabilities(std::span<const double> values);

std::size_t count_class(const TrinaryGrid& grid, CellClass c);

}  // namespace pex
