#pragma once

#include <vector>

#include "pex/grid.hpp"

namespace pex {

inline constexpr int kDefaultMinClusterSize = 4;

struct FrontierCluster {
  std::vector<Cell> cells;  // sorted (row, col)
  Vec2 centroid;            // world coords, mean of member cell centers
  int area = 0;             // == cells.size()
};

// A cell is a frontier cell when it is Free in the predicted map, not yet
// sensed (Uncertain in the observed map), and has an 8-neighbor that was
// observed Free. Result is sorted (row, col).
std::vector<Cell> extract_frontier_cells(const TrinaryGrid& pred,
                                         const TrinaryGrid& observed);

// 8-connected components of `cells`; components smaller than
// `min_cluster_size` are dropped. Sorted by area descending, then by
// centroid (row, col) ascending.
std::vector<FrontierCluster> cluster_frontiers(const std::vector<Cell>& cells,
                                               int min_cluster_size,
                                               const GridGeometry& geometry);

}  // namespace pex
