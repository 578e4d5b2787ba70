#pragma once

#include <map>
#include <span>
#include <vector>

#include "pex/frontier.hpp"
#include "pex/sensesim.hpp"

namespace pex {

// Dense rows x cols matrix of non-negative finite costs, row-major.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(int rows, int cols, double fill = 0.0);
  CostMatrix(int rows, int cols, std::vector<double> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double operator()(int r, int c) const { return entries_[index(r, c)]; }
  double& operator()(int r, int c) { return entries_[index(r, c)]; }
  std::span<const double> entries() const { return entries_; }

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> entries_;
};

struct AssignedPair {
  int row = 0;
  int col = 0;
  friend bool operator==(AssignedPair, AssignedPair) = default;
  friend auto operator<=>(AssignedPair, AssignedPair) = default;
};

// cost(i,j) = | |mu_j - P_i| - sigma | / (1 + area_weight * area_j)
CostMatrix build_cost_matrix(std::span<const RobotState> robots,
                             std::span<const FrontierCluster> clusters, double sigma,
                             double area_weight);

// Minimum-total-cost matching of min(rows, cols) pairs. Among optimal
// matchings the lexicographically smallest (row, col) sequence is returned.
// Pairs are sorted by row.
std::vector<AssignedPair> linear_sum_assignment(const CostMatrix& costs);

double assignment_cost(const CostMatrix& costs, std::span<const AssignedPair> pairs);

struct Goal {
  Vec2 point;       // cluster centroid
  int cluster = 0;  // index into the cluster list
  double cost = 0.0;
  bool shared = false;  // assigned by the fallback when clusters < robots
};

struct Assignment {
  std::map<int, Goal> goals;  // robot id -> goal
  bool complete = false;      // no frontier clusters remain
};

// Goal-point selection. No clusters: complete, no goals. Otherwise the
// optimal matching, and robots left over when there are fewer clusters than
// robots each take their individually cheapest cluster.
Assignment select_goals(std::span<const RobotState> robots,
                        std::span<const FrontierCluster> clusters, double sigma,
                        double area_weight = 0.0);

}  // namespace pex
