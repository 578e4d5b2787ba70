#pragma once

#include <vector>

#include "pex/grid.hpp"

namespace pex {

inline constexpr int kDefaultInflation = 1;

// 1 where observed != Obstacle and pred != Obstacle, after growing every
// blocked cell by a Chebyshev ball of radius `inflate`.
MaskGrid traversable_mask(const TrinaryGrid& pred, const TrinaryGrid& observed,
                          int inflate = kDefaultInflation);

// Nearest traversable cell by Chebyshev ring, ties broken by (row, col).
// Returns `goal` itself when it is already traversable. Throws kNoPath when
// the mask has no traversable cell.
Cell snap_to_traversable(const MaskGrid& mask, Cell goal);

struct PlanResult {
  std::vector<Cell> cells;  // start ... goal, consecutive cells 8-adjacent
  std::vector<Vec2> path;   // cell centers in world coordinates
  double cost = 0.0;        // meters
  Cell goal;                // goal after snapping
};

// A* over 8-connected moves (step 1, diagonal sqrt 2) with the octile
// heuristic. Diagonal moves may not cut a blocked corner. Untraversable
// goals are snapped first. Throws kNoPath when the goal is unreachable.
PlanResult plan_path(const MaskGrid& mask, Cell start, Cell goal);

}  // namespace pex
