#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pex/grid.hpp"
#include "pex/metrics.hpp"
#include "pex/predictor.hpp"
#include "pex/sensesim.hpp"

namespace pex {

struct GenerateSpec {
  int width = 64;
  int height = 64;
  int rooms = 5;
  std::uint64_t seed = 0;
  double resolution = kDefaultResolution;
};

struct PredictorConfig {
  std::string type = "null";  // null | oracle | dilate | remote
  int radius = 3;             // dilate
  std::string endpoint;       // remote
  std::chrono::milliseconds timeout = kDefaultRemoteTimeout;
  std::uint64_t parameter_count = 0;  // remote model size
};

// Exploration scenario. Lengths are in meters.
struct ScenarioConfig {
  std::filesystem::path world;          // map file, or
  std::optional<GenerateSpec> generate;  // a generated world
  std::vector<Vec2> starts;             // explicit poses, or
  int robot_count = 1;                  // random free starts drawn from `seed`
  double step_length = 0.25;
  double sensor_range = 0.5;
  double window_scale = 1.0;
  int ray_count = 360;
  int window_side = kDefaultWindowSide;
  PredictorConfig predictor;
  std::uint64_t seed = 0;
  int max_steps = 5000;
  int min_cluster_size = 1;  // corridor frontiers can be a single cell wide
  double area_weight = 0.0;
  int inflate = 0;
  Thresholds thresholds;
  // Frontier and planning view of the fused map. Unknown (0.5) counts as
  // free there, so exploration proceeds without any prediction.
  Thresholds frontier_thresholds{0.5, 0.65};
  ObjectiveWeights objective;
};

// Throws kConfigError on unknown keys, wrong types, a missing seed, or
// out-of-range values. Relative world paths resolve against `base_dir`.
ScenarioConfig parse_scenario(const nlohmann::json& doc,
                              const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);

void validate_scenario(const ScenarioConfig& config);

// World and initial robot states ready to run.
struct Scenario {
  ScenarioConfig config;
  TrinaryGrid world;
  std::vector<RobotState> robots;
};

Scenario build_scenario(const ScenarioConfig& config);
Scenario build_scenario(const ScenarioConfig& config, TrinaryGrid world);

std::unique_ptr<Predictor> make_predictor(const PredictorConfig& config,
                                          const TrinaryGrid& world);

}  // namespace pex
