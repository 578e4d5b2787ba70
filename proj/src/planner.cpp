#include "pex/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

namespace pex {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

struct Move {
  int dc;
  int dr;
  double cost;
};

constexpr Move kMoves[] = {{1, 0, 1.0},    {-1, 0, 1.0},    {0, 1, 1.0},
                           {0, -1, 1.0},   {1, 1, kSqrt2},  {1, -1, kSqrt2},
                           {-1, 1, kSqrt2}, {-1, -1, kSqrt2}};

double octile(Cell a, Cell b) {
  const int dx = std::abs(a.col - b.col);
  const int dy = std::abs(a.row - b.row);
  return (dx + dy) + (kSqrt2 - 2.0) * std::min(dx, dy);
}

bool open(const MaskGrid& mask, Cell c) { return mask.in_bounds(c) && mask[c] != 0; }

}  // namespace

MaskGrid traversable_mask(const TrinaryGrid& pred, const TrinaryGrid& observed, int inflate) {
  if (pred.width() != observed.width() || pred.height() != observed.height()) {
    throw Error(ErrorCode::kGridMismatch, "predicted and observed maps differ in size");
  }
  if (inflate < 0) {
    throw Error(ErrorCode::kInvalidArgument, "inflation radius must be >= 0");
  }
  MaskGrid mask(observed.geometry(), std::uint8_t{1});
  for (int r = 0; r < observed.height(); ++r) {
    for (int c = 0; c < observed.width(); ++c) {
      const Cell cell{c, r};
      if (observed[cell] != CellClass::kObstacle && pred[cell] != CellClass::kObstacle) {
        continue;
      }
      for (int dr = -inflate; dr <= inflate; ++dr) {
        for (int dc = -inflate; dc <= inflate; ++dc) {
          const Cell n{c + dc, r + dr};
          if (mask.in_bounds(n)) mask[n] = 0;
        }
      }
    }
  }
  return mask;
}

Cell snap_to_traversable(const MaskGrid& mask, Cell goal) {
  if (open(mask, goal)) return goal;
  const int span = std::max(mask.width(), mask.height()) +
                   std::max(std::abs(goal.col), std::abs(goal.row)) + 1;
  for (int ring = 1; ring <= span; ++ring) {
    // Rows ascending, then columns ascending, so the first hit is the
    // (row, col)-smallest cell of the ring.
    for (int r = goal.row - ring; r <= goal.row + ring; ++r) {
      const bool edge_row = r == goal.row - ring || r == goal.row + ring;
      for (int c = goal.col - ring; c <= goal.col + ring; c += edge_row ? 1 : 2 * ring) {
        if (open(mask, Cell{c, r})) return {c, r};
      }
    }
  }
  throw Error(ErrorCode::kNoPath, "no traversable cell to snap the goal to");
}

PlanResult plan_path(const MaskGrid& mask, Cell start, Cell goal) {
  if (!mask.in_bounds(start)) {
    throw Error(ErrorCode::kCellOutOfBounds, "start outside mask");
  }
  if (mask[start] == 0) {
    throw Error(ErrorCode::kInvalidArgument, "start cell is not traversable");
  }
  const Cell target = snap_to_traversable(mask, goal);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> g(mask.size(), kInf);
  std::vector<int> parent(mask.size(), -1);
  std::vector<char> closed(mask.size(), 0);

  // (f, h, row, col): lowest f first, then closest to goal, then raster order.
  using Entry = std::tuple<double, double, int, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  g[mask.index_of(start)] = 0.0;
  frontier.emplace(octile(start, target), octile(start, target), start.row, start.col);

  while (!frontier.empty()) {
    const auto [f, h, row, col] = frontier.top();
    frontier.pop();
    const Cell cur{col, row};
    const std::size_t ci = mask.index_of(cur);
    if (closed[ci]) continue;
    closed[ci] = 1;
    if (cur == target) break;
    for (const Move& m : kMoves) {
      const Cell next{col + m.dc, row + m.dr};
      if (!open(mask, next)) continue;
      if (m.dc != 0 && m.dr != 0 &&
          (!open(mask, Cell{col + m.dc, row}) || !open(mask, Cell{col, row + m.dr}))) {
        continue;
      }
      const std::size_t ni = mask.index_of(next);
      if (closed[ni]) continue;
      const double tentative = g[ci] + m.cost;
      if (tentative < g[ni]) {
        g[ni] = tentative;
        parent[ni] = static_cast<int>(ci);
        const double hn = octile(next, target);
        frontier.emplace(tentative + hn, hn, next.row, next.col);
      }
    }
  }

  const std::size_t ti = mask.index_of(target);
  if (!closed[ti]) {
    throw Error(ErrorCode::kNoPath, "goal is not reachable from start");
  }
  PlanResult result;
  result.goal = target;
  result.cost = g[ti] * mask.resolution();
  for (int i = static_cast<int>(ti); i != -1; i = parent[static_cast<std::size_t>(i)]) {
    result.cells.push_back(mask.cell_at(static_cast<std::size_t>(i)));
  }
  std::reverse(result.cells.begin(), result.cells.end());
  result.path.reserve(result.cells.size());
  for (Cell c : result.cells) result.path.push_back(mask.center_of(c));
  return result;
}

}  // namespace pex
