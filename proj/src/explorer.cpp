#include "pex/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "pex/assigner.hpp"
#include "pex/frontier.hpp"
#include "pex/map_io.hpp"
#include "pex/planner.hpp"

namespace pex {

namespace {

bool open_cell(const MaskGrid& mask, Cell c) { return mask.in_bounds(c) && mask[c] != 0; }

// Flood fill with the planner's move rules.
std::vector<char> reachable_from(const MaskGrid& mask, Cell start) {
  std::vector<char> seen(mask.size(), 0);
  std::deque<Cell> queue{start};
  seen[mask.index_of(start)] = 1;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const Cell n{c.col + dc, c.row + dr};
        if (!open_cell(mask, n) || seen[mask.index_of(n)]) continue;
        if (dr != 0 && dc != 0 &&
            (!open_cell(mask, Cell{c.col + dc, c.row}) || !open_cell(mask, Cell{c.col, c.row + dr}))) {
          continue;
        }
        seen[mask.index_of(n)] = 1;
        queue.push_back(n);
      }
    }
  }
  return seen;
}

// Obstacle beats Free beats Uncertain.
void merge_into(TrinaryGrid& merged, const TrinaryGrid& obs) {
  auto dst = merged.cells();
  const auto src = obs.cells();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (src[i] == CellClass::kObstacle ||
        (src[i] == CellClass::kFree && dst[i] == CellClass::kUncertain)) {
      dst[i] = src[i];
    }
  }
}

void override_observed(ProbabilityGrid& prob, const TrinaryGrid& obs) {
  auto dst = prob.cells();
  const auto src = obs.cells();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (src[i] != CellClass::kUncertain) dst[i] = lift_value(src[i]);
  }
}

// pred = pred (+) paste(window), restricted to the crop: outside it the
// paste is 0.5, which fusion leaves untouched.
void fuse_window(ProbabilityGrid& pred, const ObservationWindow& window,
                 const ProbabilityGrid& values) {
  const int target = window.grid.width();
  if (values.width() != target || values.height() != target) {
    throw Error(ErrorCode::kGridMismatch, "prediction does not match the window side");
  }
  for (int r = 0; r < window.crop_side; ++r) {
    for (int c = 0; c < window.crop_side; ++c) {
      const Cell global{window.world_offset.col + c, window.world_offset.row + r};
      if (!pred.in_bounds(global)) continue;
      const Cell local{crop_to_window_index(c, window.crop_side, target),
                       crop_to_window_index(r, window.crop_side, target)};
      pred[global] = fuse_probability(pred[global], values[local]);
    }
  }
}

// Nearest reachable member of the cluster other than `start`, by squared
// cell distance then (row, col).
std::optional<Cell> nearest_member(const FrontierCluster& cluster,
                                   const std::vector<char>& reach, const MaskGrid& mask,
                                   Cell start) {
  std::optional<Cell> best;
  long best_d = std::numeric_limits<long>::max();
  for (Cell c : cluster.cells) {
    if (c == start || !reach[mask.index_of(c)]) continue;
    const long dc = c.col - start.col;
    const long dr = c.row - start.row;
    const long d = dc * dc + dr * dr;
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

// Member cell closest to `point`, ties broken by (row, col).
Cell closest_member(const FrontierCluster& cluster, Vec2 point, const GridGeometry& g) {
  Cell best = cluster.cells.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (Cell c : cluster.cells) {
    const Vec2 center{g.origin.x + (c.col + 0.5) * g.resolution,
                      g.origin.y + (c.row + 0.5) * g.resolution};
    const double d = distance(center, point);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

// Frontier cell a robot travels to until it is observed.
struct Commitment {
  Cell target;
  Vec2 goal;  // centroid of the assigned cluster
};

// Advances along the planned cells, stopping before the first cell that is
// not free in the world. Returns the index of that cell, if any.
std::optional<std::size_t> advance(RobotState& robot, const std::vector<Cell>& cells,
                                   const TrinaryGrid& world) {
  std::vector<Vec2> points;
  std::optional<std::size_t> blocked;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (world[cells[k]] != CellClass::kFree) {
      blocked = k;
      break;
    }
    points.push_back(world.center_of(cells[k]));
  }
  const RobotState moved = step_along(points, robot);
  if (world.at(world.cell_of(moved.pose)) == CellClass::kFree) {
    robot = moved;
    return blocked;
  }
  // Landed on a corner shared with a blocked cell: stop at the last
  // waypoint within reach instead.
  double travelled = 0.0;
  Vec2 from = robot.pose;
  Vec2 stop = robot.pose;
  for (const Vec2& p : points) {
    travelled += distance(from, p);
    if (travelled > robot.step_length) break;
    stop = p;
    from = p;
  }
  robot.pose = stop;
  return blocked;
}

}  // namespace

ExplorationResult run_exploration(const Scenario& scenario,
                                  std::vector<std::unique_ptr<Predictor>>& predictors,
                                  const RunOptions& options) {
  const ScenarioConfig& cfg = scenario.config;
  const TrinaryGrid& world = scenario.world;
  const std::size_t n = scenario.robots.size();
  if (n == 0) throw Error(ErrorCode::kConfigError, "scenario has no robots");
  if (predictors.size() != n) {
    throw Error(ErrorCode::kConfigError, "need exactly one predictor per robot");
  }
  for (const auto& r : scenario.robots) validate_robot(r, world);

  ExplorationResult result;
  result.robots = scenario.robots;
  std::vector<TrinaryGrid> obs(n, TrinaryGrid(world.geometry(), CellClass::kUncertain));
  result.robot_maps.assign(n, ProbabilityGrid(world.geometry(), 0.5));
  const LidarConfig lidar{cfg.ray_count, cfg.sensor_range};
  const double sigma = cfg.window_scale * 2.0 * cfg.sensor_range;

  // Frontier cells given up on: clusters with no reachable member, and
  // cells a robot bumped into.
  std::vector<char> ignored(world.size(), 0);
  std::vector<char> blocked(world.size(), 0);
  std::vector<std::optional<Commitment>> commitments(n);

  for (int t = 1; t <= cfg.max_steps; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto seen = raycast(world, result.robots[i].pose, lidar);
      obs[i] = integrate_observation(std::move(obs[i]), seen);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const ObservationWindow window = extract_window(obs[i], result.robots[i], cfg.window_side);
      const PredictResponse resp = predictors[i]->predict(window);
      fuse_window(result.robot_maps[i], window, resp.prob);
      override_observed(result.robot_maps[i], obs[i]);
    }

    TrinaryGrid merged = obs[0];
    for (std::size_t i = 1; i < n; ++i) merge_into(merged, obs[i]);
    if (n == 1) {
      result.fused = result.robot_maps[0];
    } else {
      result.fused = result.robot_maps[0];
      for (std::size_t i = 1; i < n; ++i) result.fused = fuse_bayes(result.fused, result.robot_maps[i]);
      override_observed(result.fused, merged);
    }

    const TrinaryGrid frontier_view = threshold(result.fused, cfg.frontier_thresholds);
    std::vector<Cell> cells = extract_frontier_cells(frontier_view, merged);
    std::erase_if(cells, [&](Cell c) { return ignored[world.index_of(c)] != 0; });
    std::vector<FrontierCluster> clusters =
        cluster_frontiers(cells, cfg.min_cluster_size, world.geometry());

    MaskGrid mask = traversable_mask(frontier_view, merged, cfg.inflate);
    for (std::size_t k = 0; k < mask.size(); ++k) {
      if (blocked[k]) mask.cells()[k] = 0;
    }
    // Clusters no robot can reach (occluded wall corners, sealed pockets)
    // are dropped before assignment so they never hold up completion.
    std::vector<char> reach_any(world.size(), 0);
    for (const auto& robot : result.robots) {
      MaskGrid own = mask;
      own[world.cell_of(robot.pose)] = 1;
      const auto reach = reachable_from(own, world.cell_of(robot.pose));
      for (std::size_t k = 0; k < reach.size(); ++k) reach_any[k] |= reach[k];
    }
    std::erase_if(clusters, [&](const FrontierCluster& cluster) {
      const bool reachable = std::any_of(cluster.cells.begin(), cluster.cells.end(),
                                         [&](Cell c) { return reach_any[world.index_of(c)] != 0; });
      if (!reachable) {
        for (Cell c : cluster.cells) ignored[world.index_of(c)] = 1;
      }
      return !reachable;
    });
    std::vector<int> cluster_of(world.size(), -1);
    for (std::size_t j = 0; j < clusters.size(); ++j) {
      for (Cell c : clusters[j].cells) cluster_of[world.index_of(c)] = static_cast<int>(j);
    }

    // A commitment lapses once its target is no longer a clustered frontier
    // cell; the remaining robots share one assignment.
    std::vector<RobotState> free_robots;
    for (std::size_t i = 0; i < n; ++i) {
      if (commitments[i] && cluster_of[world.index_of(commitments[i]->target)] < 0) {
        commitments[i].reset();
      }
      if (!commitments[i]) free_robots.push_back(result.robots[i]);
    }
    const Assignment assignment = select_goals(free_robots, clusters, sigma, cfg.area_weight);
    for (std::size_t i = 0; i < n; ++i) {
      const auto it = assignment.goals.find(result.robots[i].id);
      if (it == assignment.goals.end()) continue;
      const FrontierCluster& cluster = clusters[static_cast<std::size_t>(it->second.cluster)];
      commitments[i] = Commitment{closest_member(cluster, it->second.point, world.geometry()),
                                  it->second.point};
    }

    TickRecord rec;
    rec.t = t;
    rec.coverage = coverage(merged, world);
    rec.accuracy = accuracy(threshold(result.fused, cfg.thresholds), world);
    rec.frontier_count = static_cast<int>(clusters.size());
    for (std::size_t i = 0; i < n; ++i) {
      RobotTick rt{result.robots[i].id, result.robots[i].pose, std::nullopt};
      if (commitments[i]) rt.goal = commitments[i]->goal;
      rec.robots.push_back(rt);
    }
    if (options.snapshot_every > 0 && !options.snapshot_dir.empty() &&
        t % options.snapshot_every == 0) {
      rec.snapshot = fmt::format("tick_{:06d}.pgm", t);
      save_snapshot(result.fused, options.snapshot_dir / rec.snapshot);
    }
    result.ticks.push_back(std::move(rec));
    result.steps = t;
    result.observed = std::move(merged);
    if (clusters.empty()) {
      result.complete = true;
      break;
    }

    for (std::size_t i = 0; i < n; ++i) {
      if (!commitments[i]) continue;
      RobotState& robot = result.robots[i];
      const Cell start = world.cell_of(robot.pose);
      MaskGrid own = mask;
      own[start] = 1;

      std::optional<PlanResult> plan;
      try {
        plan = plan_path(own, start, commitments[i]->target);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNoPath) throw;
      }
      if (!plan || plan->goal == start) {
        // Retarget to the nearest reachable cell of the same cluster.
        plan.reset();
        const int j = cluster_of[world.index_of(commitments[i]->target)];
        const FrontierCluster& cluster = clusters[static_cast<std::size_t>(j)];
        const auto reach = reachable_from(own, start);
        if (const auto target = nearest_member(cluster, reach, own, start)) {
          commitments[i]->target = *target;
          plan = plan_path(own, start, *target);
        } else {
          for (Cell c : cluster.cells) ignored[world.index_of(c)] = 1;
          commitments[i].reset();
          continue;
        }
      }
      if (const auto hit = advance(robot, plan->cells, world)) {
        const Cell c = plan->cells[*hit];
        blocked[world.index_of(c)] = 1;
        ignored[world.index_of(c)] = 1;
      }
    }
  }

  result.predicted = threshold(result.fused, cfg.thresholds);
  result.map_error = map_l1_error(world, result.fused);
  ObjectiveWeights weights = cfg.objective;
  if (weights.rho == 0.0) weights.rho = static_cast<double>(predictors[0]->parameter_count());
  result.objective = objective(weights, result.steps, result.map_error);
  return result;
}

ExplorationResult run_exploration(const Scenario& scenario, const RunOptions& options) {
  std::vector<std::unique_ptr<Predictor>> predictors;
  for (std::size_t i = 0; i < scenario.robots.size(); ++i) {
    predictors.push_back(make_predictor(scenario.config.predictor, scenario.world));
  }
  return run_exploration(scenario, predictors, options);
}

void write_metrics_csv(std::ostream& out, const std::vector<TickRecord>& ticks) {
  out << kMetricsHeader << '\n';
  for (const auto& rec : ticks) {
    for (const auto& r : rec.robots) {
      const std::string gx = r.goal ? fmt::format("{:.6f}", r.goal->x) : "nan";
      const std::string gy = r.goal ? fmt::format("{:.6f}", r.goal->y) : "nan";
      fmt::print(out, "{},{},{:.6f},{:.6f},{:.6f},{:.6f},{},{},{}\n", rec.t, r.robot_id,
                 r.pose.x, r.pose.y, rec.coverage, rec.accuracy, rec.frontier_count, gx, gy);
    }
  }
}

std::optional<int> ticks_to_coverage(const std::vector<TickRecord>& ticks, double fraction) {
  for (const auto& rec : ticks) {
    if (rec.coverage >= fraction) return rec.t;
  }
  return std::nullopt;
}

}  // namespace pex
