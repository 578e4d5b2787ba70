#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>

#include "pex/assigner.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace pex;
using pex::testing::error_of;

namespace {

CostMatrix random_integer_matrix(Rng& rng, int rows, int cols, int max_value) {
  CostMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = static_cast<double>(rng.uniform_int(0, max_value));
  }
  return m;
}

// Every matching of min(rows, cols) pairs, as row-sorted pair lists; the
// optimum total and the lexicographically smallest optimal list.
std::pair<double, std::vector<AssignedPair>> lexicographic_optimum(const CostMatrix& m) {
  const int need = std::min(m.rows(), m.cols());
  double best = std::numeric_limits<double>::infinity();
  std::vector<AssignedPair> best_pairs;
  std::vector<AssignedPair> cur;
  std::vector<char> used(static_cast<std::size_t>(m.cols()), 0);
  std::function<void(int, double)> go = [&](int row, double total) {
    if (static_cast<int>(cur.size()) == need) {
      if (total < best || (total == best && cur < best_pairs)) {
        best = total;
        best_pairs = cur;
      }
      return;
    }
    if (row == m.rows()) return;
    for (int c = 0; c < m.cols(); ++c) {
      if (used[c]) continue;
      used[c] = 1;
      cur.push_back({row, c});
      go(row + 1, total + m(row, c));
      cur.pop_back();
      used[c] = 0;
    }
    go(row + 1, total);  // leave this row out
  };
  go(0, 0.0);
  return {best, best_pairs};
}

FrontierCluster cluster_at(Vec2 centroid, int area = 4) {
  FrontierCluster c;
  c.centroid = centroid;
  c.area = area;
  for (int i = 0; i < area; ++i) c.cells.push_back({i, 0});
  return c;
}

RobotState robot_at(int id, Vec2 pose) {
  RobotState r;
  r.id = id;
  r.pose = pose;
  return r;
}

}  // namespace

TEST_CASE("cost matrix examples") {
  const std::vector<RobotState> origin = {robot_at(0, {0, 0})};
  CHECK(build_cost_matrix(origin, std::vector{cluster_at({3, 4})}, 5.0, 0.0)(0, 0) == 0.0);
  CHECK(build_cost_matrix(origin, std::vector{cluster_at({0, 0})}, 10.0, 0.0)(0, 0) == 10.0);
  CHECK(build_cost_matrix(origin, std::vector{cluster_at({6, 8})}, 4.0, 0.0)(0, 0) == 6.0);
  // Area weighting divides by 1 + w * area.
  CHECK(build_cost_matrix(origin, std::vector{cluster_at({6, 8}, 10)}, 4.0, 0.1)(0, 0) ==
        doctest::Approx(3.0));
}

TEST_CASE("cost matrix errors") {
  const std::vector<RobotState> one = {robot_at(0, {0, 0})};
  const std::vector<FrontierCluster> none;
  const std::vector<FrontierCluster> some = {cluster_at({1, 1})};
  CHECK(error_of([&] { build_cost_matrix(one, none, 1.0, 0.0); }) == ErrorCode::kEmptyClusters);
  CHECK(error_of([&] { build_cost_matrix(one, some, 0.0, 0.0); }) == ErrorCode::kInvalidArgument);
  CHECK(error_of([&] { build_cost_matrix(one, some, 1.0, -0.5); }) == ErrorCode::kInvalidArgument);
  CHECK(error_of([] { CostMatrix(2, 2, std::vector<double>{1, 2, 3}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(error_of([] { CostMatrix(1, 2, std::vector<double>{1, -2}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(error_of([] { CostMatrix(-1, 2); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("cost matches the formula pointwise on random triples") {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vec2 p{rng.uniform(-20, 20), rng.uniform(-20, 20)};
    const Vec2 mu{rng.uniform(-20, 20), rng.uniform(-20, 20)};
    const double sigma = rng.uniform(0.01, 10);
    const double expect = std::abs(std::hypot(mu.x - p.x, mu.y - p.y) - sigma);
    const double got =
        build_cost_matrix(std::vector{robot_at(0, p)}, std::vector{cluster_at(mu)}, sigma, 0.0)(0, 0);
    CHECK(std::abs(got - expect) <= 1e-12);
  }
  // On the circle of radius sigma the cost vanishes.
  for (int k = 0; k < 36; ++k) {
    const double a = k * std::numbers::pi / 18;
    const Vec2 mu{3.0 * std::cos(a), 3.0 * std::sin(a)};
    const double got =
        build_cost_matrix(std::vector{robot_at(0, {0, 0})}, std::vector{cluster_at(mu)}, 3.0, 0.0)(0, 0);
    CHECK(got <= 1e-12);
  }
}

TEST_CASE("translating everything leaves the cost matrix unchanged") {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RobotState> robots;
    std::vector<FrontierCluster> clusters;
    for (int i = 0; i < 3; ++i) robots.push_back(robot_at(i, {rng.uniform(0, 5), rng.uniform(0, 5)}));
    for (int j = 0; j < 4; ++j) {
      clusters.push_back(cluster_at({rng.uniform(0, 5), rng.uniform(0, 5)},
                                    static_cast<int>(rng.uniform_int(1, 30))));
    }
    const Vec2 shift{rng.uniform(-100, 100), rng.uniform(-100, 100)};
    const CostMatrix a = build_cost_matrix(robots, clusters, 1.5, 0.01);
    for (auto& r : robots) r.pose = {r.pose.x + shift.x, r.pose.y + shift.y};
    for (auto& c : clusters) c.centroid = {c.centroid.x + shift.x, c.centroid.y + shift.y};
    const CostMatrix b = build_cost_matrix(robots, clusters, 1.5, 0.01);
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
      CHECK(std::abs(a.entries()[i] - b.entries()[i]) <= 1e-9);
    }
  }
}

TEST_CASE("assignment examples") {
  const CostMatrix m(2, 2, std::vector<double>{1, 2, 2, 1});
  const auto pairs = linear_sum_assignment(m);
  CHECK(pairs == std::vector<AssignedPair>{{0, 0}, {1, 1}});
  CHECK(assignment_cost(m, pairs) == 2.0);
  CHECK(linear_sum_assignment(CostMatrix(1, 1, std::vector<double>{4})) ==
        std::vector<AssignedPair>{{0, 0}});
  CHECK(error_of([] { linear_sum_assignment(CostMatrix(0, 3)); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("assignment equals brute force on random matrices up to 7x7") {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const int rows = static_cast<int>(rng.uniform_int(1, 7));
    const int cols = static_cast<int>(rng.uniform_int(1, 7));
    const CostMatrix m = random_integer_matrix(rng, rows, cols, 20);
    const auto pairs = linear_sum_assignment(m);
    CHECK(pairs.size() == static_cast<std::size_t>(std::min(rows, cols)));
    CHECK(assignment_cost(m, pairs) == oracle::brute_force_lsa(m));
    std::set<int> rs, cs;
    for (const auto& p : pairs) {
      CHECK(rs.insert(p.row).second);
      CHECK(cs.insert(p.col).second);
    }
  }
}

TEST_CASE("real-valued costs agree with brute force") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = static_cast<int>(rng.uniform_int(1, 6));
    const int cols = static_cast<int>(rng.uniform_int(1, 6));
    CostMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform(0, 10);
    }
    CHECK(assignment_cost(m, linear_sum_assignment(m)) ==
          doctest::Approx(oracle::brute_force_lsa(m)).epsilon(1e-12));
  }
}

TEST_CASE("ties resolve to the lexicographically smallest optimal pairing") {
  Rng rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    const int rows = static_cast<int>(rng.uniform_int(1, 6));
    const int cols = static_cast<int>(rng.uniform_int(1, 6));
    // Few distinct values force many ties.
    const CostMatrix m = random_integer_matrix(rng, rows, cols, 2);
    const auto [best, expect] = lexicographic_optimum(m);
    const auto pairs = linear_sum_assignment(m);
    CHECK(assignment_cost(m, pairs) == best);
    CHECK(pairs == expect);
  }
  CHECK(linear_sum_assignment(CostMatrix(3, 3, 1.0)) ==
        std::vector<AssignedPair>{{0, 0}, {1, 1}, {2, 2}});
  CHECK(linear_sum_assignment(CostMatrix(3, 1, 1.0)) == std::vector<AssignedPair>{{0, 0}});
}

TEST_CASE("adding a constant keeps the pairing optimal") {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(1, 6));
    const int k = static_cast<int>(rng.uniform_int(1, 6));
    const CostMatrix m = random_integer_matrix(rng, n, k, 30);
    CostMatrix shifted = m;
    const double add = static_cast<double>(rng.uniform_int(1, 100));
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < k; ++c) shifted(r, c) += add;
    }
    const auto pairs = linear_sum_assignment(shifted);
    CHECK(assignment_cost(m, pairs) == oracle::brute_force_lsa(m));
    CHECK(pairs == linear_sum_assignment(m));
  }
}

TEST_CASE("select_goals: no clusters means complete") {
  const std::vector<RobotState> robots = {robot_at(0, {0, 0}), robot_at(1, {1, 1})};
  const Assignment a = select_goals(robots, std::vector<FrontierCluster>{}, 1.0);
  CHECK(a.complete);
  CHECK(a.goals.empty());
}

TEST_CASE("select_goals: one robot takes the argmin") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<RobotState> robots = {robot_at(4, {rng.uniform(0, 5), rng.uniform(0, 5)})};
    std::vector<FrontierCluster> clusters;
    for (int j = 0; j < 3; ++j) clusters.push_back(cluster_at({rng.uniform(0, 5), rng.uniform(0, 5)}));
    const double sigma = rng.uniform(0.1, 2.0);
    const Assignment a = select_goals(robots, clusters, sigma);
    CHECK_FALSE(a.complete);
    REQUIRE(a.goals.count(4) == 1);
    int best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 3; ++j) {
      const double c = std::abs(distance(clusters[j].centroid, robots[0].pose) - sigma);
      if (c < best_cost) {
        best_cost = c;
        best = j;
      }
    }
    CHECK(a.goals.at(4).cluster == best);
    CHECK(a.goals.at(4).point == clusters[best].centroid);
    CHECK_FALSE(a.goals.at(4).shared);
  }
}

TEST_CASE("select_goals: three robots, two clusters") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RobotState> robots;
    for (int i = 0; i < 3; ++i) robots.push_back(robot_at(10 + i, {rng.uniform(0, 5), rng.uniform(0, 5)}));
    const std::vector<FrontierCluster> clusters = {cluster_at({rng.uniform(0, 5), rng.uniform(0, 5)}),
                                                   cluster_at({rng.uniform(0, 5), rng.uniform(0, 5)})};
    const double sigma = 0.5;
    const Assignment a = select_goals(robots, clusters, sigma);
    REQUIRE(a.goals.size() == 3);
    const CostMatrix m = build_cost_matrix(robots, clusters, sigma, 0.0);

    // Brute force over every choice of two robots for the two clusters.
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i != j) best = std::min(best, m(i, 0) + m(j, 1));
      }
    }
    double matched = 0.0;
    int shared = -1;
    std::set<int> used;
    for (int i = 0; i < 3; ++i) {
      const Goal& g = a.goals.at(10 + i);
      if (g.shared) {
        shared = i;
        continue;
      }
      matched += m(i, g.cluster);
      used.insert(g.cluster);
    }
    CHECK(used.size() == 2);
    CHECK(matched == doctest::Approx(best).epsilon(1e-12));
    REQUIRE(shared >= 0);
    const Goal& g = a.goals.at(10 + shared);
    CHECK(m(shared, g.cluster) == std::min(m(shared, 0), m(shared, 1)));
  }
}

TEST_CASE("select_goals: distinct goals when clusters are plentiful, and deterministic") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RobotState> robots;
    std::vector<FrontierCluster> clusters;
    const int n = static_cast<int>(rng.uniform_int(1, 4));
    const int k = static_cast<int>(rng.uniform_int(n, 6));
    for (int i = 0; i < n; ++i) robots.push_back(robot_at(i, {rng.uniform(0, 5), rng.uniform(0, 5)}));
    for (int j = 0; j < k; ++j) clusters.push_back(cluster_at({rng.uniform(0, 5), rng.uniform(0, 5)}));
    const Assignment a = select_goals(robots, clusters, 1.0, 0.01);
    const Assignment b = select_goals(robots, clusters, 1.0, 0.01);
    std::set<int> targets;
    for (const auto& [id, g] : a.goals) {
      CHECK(targets.insert(g.cluster).second);
      CHECK(g.point == b.goals.at(id).point);
    }
    CHECK(a.goals.size() == static_cast<std::size_t>(n));
  }
}

TEST_CASE("select_goals: mirror-symmetric robots split between mirrored clusters") {
  const std::vector<RobotState> robots = {robot_at(0, {1, 2}), robot_at(1, {3, 2})};
  const std::vector<FrontierCluster> clusters = {cluster_at({0, 2}), cluster_at({4, 2})};
  const Assignment a = select_goals(robots, clusters, 0.25);
  CHECK(a.goals.at(0).point == Vec2{0, 2});
  CHECK(a.goals.at(1).point == Vec2{4, 2});
}
