#include "pex/frontier.hpp"

#include <algorithm>
#include <unordered_set>

namespace pex {

namespace {

constexpr Cell kNeighbors8[] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                {1, 0},   {-1, 1}, {0, 1},  {1, 1}};

struct ClusterKey {
  int area;
  double mean_row;
  double mean_col;
};

}  // namespace

std::vector<Cell> extract_frontier_cells(const TrinaryGrid& pred,
                                         const TrinaryGrid& observed) {
  if (pred.width() != observed.width() || pred.height() != observed.height()) {
    throw Error(ErrorCode::kGridMismatch, "predicted and observed maps differ in size");
  }
  std::vector<Cell> out;
  for (int r = 0; r < observed.height(); ++r) {
    for (int c = 0; c < observed.width(); ++c) {
      const Cell cell{c, r};
      if (pred[cell] != CellClass::kFree || observed[cell] != CellClass::kUncertain) {
        continue;
      }
      for (Cell d : kNeighbors8) {
        const Cell n{c + d.col, r + d.row};
        if (observed.in_bounds(n) && observed[n] == CellClass::kFree) {
          out.push_back(cell);
          break;
        }
      }
    }
  }
  return out;
}

std::vector<FrontierCluster> cluster_frontiers(const std::vector<Cell>& cells,
                                               int min_cluster_size,
                                               const GridGeometry& geometry) {
  std::vector<Cell> ordered = cells;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  std::unordered_set<Cell> unvisited(ordered.begin(), ordered.end());
  std::vector<std::pair<ClusterKey, FrontierCluster>> found;
  std::vector<Cell> stack;

  for (Cell seed : ordered) {
    if (unvisited.erase(seed) == 0) continue;
    FrontierCluster cluster;
    stack.assign(1, seed);
    while (!stack.empty()) {
      const Cell c = stack.back();
      stack.pop_back();
      cluster.cells.push_back(c);
      for (Cell d : kNeighbors8) {
        const Cell n{c.col + d.col, c.row + d.row};
        if (unvisited.erase(n) != 0) stack.push_back(n);
      }
    }
    if (static_cast<int>(cluster.cells.size()) < min_cluster_size) continue;

    std::sort(cluster.cells.begin(), cluster.cells.end());
    double sum_col = 0.0;
    double sum_row = 0.0;
    for (Cell c : cluster.cells) {
      sum_col += c.col;
      sum_row += c.row;
    }
    const double n = static_cast<double>(cluster.cells.size());
    const double mean_col = sum_col / n;
    const double mean_row = sum_row / n;
    cluster.area = static_cast<int>(cluster.cells.size());
    cluster.centroid = {geometry.origin.x + (mean_col + 0.5) * geometry.resolution,
                        geometry.origin.y + (mean_row + 0.5) * geometry.resolution};
    found.push_back({{cluster.area, mean_row, mean_col}, std::move(cluster)});
  }

  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first.area != b.first.area) return a.first.area > b.first.area;
    if (a.first.mean_row != b.first.mean_row) return a.first.mean_row < b.first.mean_row;
    return a.first.mean_col < b.first.mean_col;
  });
  std::vector<FrontierCluster> out;
  out.reserve(found.size());
  for (auto& [key, cluster] : found) out.push_back(std::move(cluster));
  return out;
}

}  // namespace pex
