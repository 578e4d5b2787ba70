#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pex/grid.hpp"
#include "pex/predictor.hpp"
#include "pex/scenario.hpp"

namespace pex {

struct RobotTick {
  int robot_id = 0;
  Vec2 pose;                 // pose when the goal was chosen
  std::optional<Vec2> goal;  // assigned cluster centroid
};

struct TickRecord {
  int t = 0;  // 1-based; the last record's t is the exploration time T
  std::vector<RobotTick> robots;
  double coverage = 0.0;
  double accuracy = 0.0;
  int frontier_count = 0;
  std::string snapshot;  // fused-map snapshot file name, empty if none
};

struct ExplorationResult {
  std::vector<TickRecord> ticks;
  bool complete = false;
  int steps = 0;
  std::vector<RobotState> robots;          // final states
  TrinaryGrid observed;                    // merged observations
  std::vector<ProbabilityGrid> robot_maps;  // per-robot fused predictions
  ProbabilityGrid fused;                   // M-hat total
  TrinaryGrid predicted;                   // fused map thresholded
  double map_error = 0.0;                  // mean |lift(truth) - fused|
  double objective = 0.0;
};

struct RunOptions {
  std::filesystem::path snapshot_dir;  // per-tick snapshots go here
  int snapshot_every = 0;              // 0 disables per-tick snapshots
};

// One predictor per robot.
ExplorationResult run_exploration(const Scenario& scenario,
                                  std::vector<std::unique_ptr<Predictor>>& predictors,
                                  const RunOptions& options = {});
// Predictors built from the scenario config.
ExplorationResult run_exploration(const Scenario& scenario, const RunOptions& options = {});

inline constexpr const char* kMetricsHeader =
    "t,robot_id,x,y,coverage,accuracy,frontier_count,goal_x,goal_y";

// One row per robot per tick; missing goals are written as nan.
void write_metrics_csv(std::ostream& out, const std::vector<TickRecord>& ticks);

// First tick whose coverage reaches `fraction`.
std::optional<int> ticks_to_coverage(const std::vector<TickRecord>& ticks, double fraction);

}  // namespace pex
