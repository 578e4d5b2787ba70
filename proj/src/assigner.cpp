#include "pex/assigner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Kuhn-Munkres with potentials (rows <= cols). Returns the optimal total and
// the column matched to each row.
double hungarian(const std::vector<std::vector<double>>& a, std::vector<int>& row_to_col) {
  const int n = static_cast<int>(a.size());
  const int m = n == 0 ? 0 : static_cast<int>(a[0].size());
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  row_to_col.assign(n, -1);
  double total = 0.0;
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) {
      row_to_col[p[j] - 1] = j - 1;
      total += a[p[j] - 1][j - 1];
    }
  }
  return total;
}

// Optimal cost of matching `need` pairs between the given rows and columns;
// infinity when fewer than `need` pairs are possible.
double optimal_subset(const CostMatrix& costs, const std::vector<int>& rows,
                      const std::vector<int>& cols, std::size_t need,
                      std::vector<AssignedPair>* pairs = nullptr) {
  if (need == 0) return 0.0;
  if (rows.size() < need || cols.size() < need) return kInf;
  const bool transpose = rows.size() > cols.size();
  const auto& outer = transpose ? cols : rows;
  const auto& inner = transpose ? rows : cols;
  std::vector<std::vector<double>> a(outer.size(), std::vector<double>(inner.size()));
  for (std::size_t i = 0; i < outer.size(); ++i) {
    for (std::size_t j = 0; j < inner.size(); ++j) {
      a[i][j] = transpose ? costs(inner[j], outer[i]) : costs(outer[i], inner[j]);
    }
  }
  std::vector<int> matched;
  const double total = hungarian(a, matched);
  if (pairs != nullptr) {
    pairs->clear();
    for (std::size_t i = 0; i < matched.size(); ++i) {
      if (matched[i] < 0) continue;
      const int r = transpose ? inner[matched[i]] : outer[i];
      const int c = transpose ? outer[i] : inner[matched[i]];
      pairs->push_back({r, c});
    }
    std::sort(pairs->begin(), pairs->end());
  }
  return total;
}

bool same_total(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

CostMatrix::CostMatrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols),
      entries_(static_cast<std::size_t>(std::max(rows, 0)) *
                   static_cast<std::size_t>(std::max(cols, 0)),
               fill) {
  if (rows < 0 || cols < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative cost matrix dimensions");
  }
}

CostMatrix::CostMatrix(int rows, int cols, std::vector<double> entries)
    : CostMatrix(rows, cols) {
  if (entries.size() != entries_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "cost entries do not match dimensions");
  }
  for (double e : entries) {
    if (!std::isfinite(e) || e < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "costs must be finite and >= 0");
    }
  }
  entries_ = std::move(entries);
}

CostMatrix build_cost_matrix(std::span<const RobotState> robots,
                             std::span<const FrontierCluster> clusters, double sigma,
                             double area_weight) {
  if (clusters.empty()) {
    throw Error(ErrorCode::kEmptyClusters, "no frontier clusters to cost");
  }
  if (!(sigma > 0.0) || !(area_weight >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "require sigma > 0 and area_weight >= 0");
  }
  CostMatrix m(static_cast<int>(robots.size()), static_cast<int>(clusters.size()));
  for (std::size_t i = 0; i < robots.size(); ++i) {
    for (std::size_t j = 0; j < clusters.size(); ++j) {
      const double base = std::abs(distance(clusters[j].centroid, robots[i].pose) - sigma);
      m(static_cast<int>(i), static_cast<int>(j)) =
          base / (1.0 + area_weight * clusters[j].area);
    }
  }
  return m;
}

std::vector<AssignedPair> linear_sum_assignment(const CostMatrix& costs) {
  if (costs.rows() == 0 || costs.cols() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "cost matrix is empty");
  }
  const std::size_t need = static_cast<std::size_t>(std::min(costs.rows(), costs.cols()));
  std::vector<int> all_rows(costs.rows()), all_cols(costs.cols());
  for (int i = 0; i < costs.rows(); ++i) all_rows[i] = i;
  for (int j = 0; j < costs.cols(); ++j) all_cols[j] = j;
  std::vector<AssignedPair> direct;
  const double best = optimal_subset(costs, all_rows, all_cols, need, &direct);

  // Fix rows in order to the smallest column that keeps the total optimal.
  std::vector<AssignedPair> pairs;
  std::vector<int> free_cols = all_cols;
  double fixed = 0.0;
  for (int i = 0; i < costs.rows() && pairs.size() < need; ++i) {
    const std::vector<int> later_rows(all_rows.begin() + i + 1, all_rows.end());
    bool placed = false;
    for (std::size_t k = 0; k < free_cols.size() && !placed; ++k) {
      const int c = free_cols[k];
      std::vector<int> rest_cols = free_cols;
      rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(k));
      const double total = fixed + costs(i, c) +
                           optimal_subset(costs, later_rows, rest_cols, need - pairs.size() - 1);
      if (same_total(total, best)) {
        pairs.push_back({i, c});
        fixed += costs(i, c);
        free_cols = std::move(rest_cols);
        placed = true;
      }
    }
    // Otherwise row i is one of the rows left out of an optimal matching.
  }
  // Rounding can defeat the equality test on pathological inputs; the plain
  // solver result is still optimal.
  if (pairs.size() != need) return direct;
  return pairs;
}

double assignment_cost(const CostMatrix& costs, std::span<const AssignedPair> pairs) {
  double total = 0.0;
  for (const auto& p : pairs) total += costs(p.row, p.col);
  return total;
}

Assignment select_goals(std::span<const RobotState> robots,
                        std::span<const FrontierCluster> clusters, double sigma,
                        double area_weight) {
  Assignment result;
  if (clusters.empty()) {
    result.complete = true;
    return result;
  }
  if (robots.empty()) return result;

  const CostMatrix costs = build_cost_matrix(robots, clusters, sigma, area_weight);
  std::vector<char> assigned(robots.size(), 0);
  for (const auto& [row, col] : linear_sum_assignment(costs)) {
    result.goals[robots[row].id] = {clusters[col].centroid, col, costs(row, col), false};
    assigned[row] = 1;
  }
  for (int i = 0; i < costs.rows(); ++i) {
    if (assigned[i]) continue;
    int best = 0;
    for (int j = 1; j < costs.cols(); ++j) {
      if (costs(i, j) < costs(i, best)) best = j;
    }
    result.goals[robots[i].id] = {clusters[best].centroid, best, costs(i, best), true};
  }
  return result;
}

}  // namespace pex
