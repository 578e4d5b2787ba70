#include "pex/scenario.hpp"

#include <fstream>
#include <set>

#include "pex/map_io.hpp"
#include "pex/rng.hpp"
#include "pex/worldgen.hpp"

namespace pex {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::kConfigError, message);
}

// Object reader that rejects keys nobody asked for.
class Fields {
 public:
  Fields(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj.is_object()) config_error(where_ + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    out = as<T>(obj_.at(key), key);
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  template <typename T>
  T as(const json& v, const std::string& key) const {
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw std::runtime_error("not a number");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw std::runtime_error("not an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
            throw std::runtime_error("negative");
          }
        }
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::runtime_error("not a string");
      }
      return v.get<T>();
    } catch (const std::exception& e) {
      config_error(where_ + "." + key + ": " + e.what());
    }
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) config_error(where_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

Thresholds read_thresholds(Fields& f, const std::string& free_key,
                           const std::string& obs_key, Thresholds t) {
  f.get(free_key, t.tau_free);
  f.get(obs_key, t.tau_obs);
  return t;
}

}  // namespace

ScenarioConfig parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  ScenarioConfig cfg;
  Fields f(doc, "scenario");

  if (f.has("world")) {
    const auto p = f.as<std::string>(f.at("world"), "world");
    cfg.world = std::filesystem::path(p).is_absolute() ? std::filesystem::path(p) : base_dir / p;
  }
  if (f.has("generate")) {
    Fields g(f.at("generate"), "generate");
    GenerateSpec spec;
    g.get("width", spec.width);
    g.get("height", spec.height);
    g.get("rooms", spec.rooms);
    g.get("seed", spec.seed);
    g.get("resolution", spec.resolution);
    g.finish();
    cfg.generate = spec;
  }
  if (f.has("robots")) {
    const json& robots = f.at("robots");
    if (!robots.is_array()) config_error("scenario.robots: expected an array");
    for (const json& r : robots) {
      Fields rf(r, "robots[]");
      Vec2 p;
      if (!rf.has("x") || !rf.has("y")) config_error("robots[]: x and y are required");
      rf.get("x", p.x);
      rf.get("y", p.y);
      rf.finish();
      cfg.starts.push_back(p);
    }
    cfg.robot_count = static_cast<int>(cfg.starts.size());
  }
  if (f.has("robot_count")) {
    f.get("robot_count", cfg.robot_count);
    if (!cfg.starts.empty() && cfg.robot_count != static_cast<int>(cfg.starts.size())) {
      config_error("scenario: robot_count disagrees with the robots list");
    }
  }
  f.get("step_length", cfg.step_length);
  f.get("sensor_range", cfg.sensor_range);
  f.get("window_scale", cfg.window_scale);
  f.get("ray_count", cfg.ray_count);
  f.get("window_side", cfg.window_side);
  if (f.has("predictor")) {
    Fields p(f.at("predictor"), "predictor");
    p.get("type", cfg.predictor.type);
    p.get("radius", cfg.predictor.radius);
    p.get("endpoint", cfg.predictor.endpoint);
    double timeout_s = static_cast<double>(cfg.predictor.timeout.count()) / 1000.0;
    p.get("timeout_s", timeout_s);
    if (!(timeout_s > 0.0)) config_error("predictor.timeout_s must be > 0");
    cfg.predictor.timeout = std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000.0));
    p.get("parameter_count", cfg.predictor.parameter_count);
    p.finish();
  }
  if (!f.has("seed")) config_error("scenario: seed is required");
  f.get("seed", cfg.seed);
  f.get("max_steps", cfg.max_steps);
  f.get("min_cluster_size", cfg.min_cluster_size);
  f.get("area_weight", cfg.area_weight);
  f.get("inflate", cfg.inflate);
  cfg.thresholds = read_thresholds(f, "tau_free", "tau_obs", cfg.thresholds);
  cfg.frontier_thresholds.tau_free = 0.5;
  f.get("frontier_tau_free", cfg.frontier_thresholds.tau_free);
  cfg.frontier_thresholds.tau_obs = cfg.thresholds.tau_obs;
  if (f.has("objective")) {
    Fields o(f.at("objective"), "objective");
    if (o.has("theta")) {
      const json& theta = o.at("theta");
      if (!theta.is_array() || theta.size() != 3) {
        config_error("objective.theta: expected three numbers");
      }
      cfg.objective.theta1 = o.as<double>(theta[0], "theta[0]");
      cfg.objective.theta2 = o.as<double>(theta[1], "theta[1]");
      cfg.objective.theta3 = o.as<double>(theta[2], "theta[2]");
    }
    o.get("rho", cfg.objective.rho);
    o.finish();
  }
  f.finish();
  validate_scenario(cfg);
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open scenario " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    config_error(path.string() + ": " + e.what());
  }
  return parse_scenario(doc, path.parent_path());
}

void validate_scenario(const ScenarioConfig& c) {
  if (c.world.empty() == !c.generate.has_value()) {
    config_error("scenario: give exactly one of world or generate");
  }
  if (c.robot_count < 1) config_error("scenario: need at least one robot");
  if (!(c.step_length > 0.0) || !(c.sensor_range > 0.0) || !(c.window_scale > 0.0)) {
    config_error("scenario: step_length, sensor_range and window_scale must be > 0");
  }
  if (c.ray_count < 4) config_error("scenario: ray_count must be >= 4");
  if (c.window_side < 8) config_error("scenario: window_side must be >= 8");
  if (c.max_steps < 1) config_error("scenario: max_steps must be >= 1");
  if (c.min_cluster_size < 1) config_error("scenario: min_cluster_size must be >= 1");
  if (!(c.area_weight >= 0.0)) config_error("scenario: area_weight must be >= 0");
  if (c.inflate < 0) config_error("scenario: inflate must be >= 0");
  const auto& p = c.predictor;
  if (p.type != "null" && p.type != "oracle" && p.type != "dilate" && p.type != "remote") {
    config_error("predictor.type must be null, oracle, dilate or remote");
  }
  if (p.type == "dilate" && p.radius < 0) config_error("predictor.radius must be >= 0");
  if (p.type == "remote" && p.endpoint.empty()) config_error("predictor.endpoint is required");
  try {
    validate_thresholds(c.thresholds);
    validate_thresholds(c.frontier_thresholds);
    validate_weights(c.objective);
  } catch (const Error& e) {
    config_error(e.detail());
  }
}

Scenario build_scenario(const ScenarioConfig& config) {
  validate_scenario(config);
  if (config.generate) {
    const auto& g = *config.generate;
    return build_scenario(config, generate_world(g.width, g.height, g.rooms, g.seed, g.resolution));
  }
  return build_scenario(config, load_map(config.world));
}

Scenario build_scenario(const ScenarioConfig& config, TrinaryGrid world) {
  validate_scenario(config);
  Scenario s{config, std::move(world), {}};
  std::vector<Vec2> poses = config.starts;
  if (poses.empty()) {
    std::vector<Cell> free_cells;
    for (std::size_t i = 0; i < s.world.size(); ++i) {
      if (s.world.cells()[i] == CellClass::kFree) free_cells.push_back(s.world.cell_at(i));
    }
    if (static_cast<int>(free_cells.size()) < config.robot_count) {
      config_error("scenario: not enough free cells for the robots");
    }
    Rng rng(config.seed);
    for (int k = 0; k < config.robot_count; ++k) {
      const auto j = static_cast<std::size_t>(
          rng.uniform_int(k, static_cast<std::int64_t>(free_cells.size()) - 1));
      std::swap(free_cells[static_cast<std::size_t>(k)], free_cells[j]);
      poses.push_back(s.world.center_of(free_cells[static_cast<std::size_t>(k)]));
    }
  }
  for (std::size_t i = 0; i < poses.size(); ++i) {
    RobotState r;
    r.id = static_cast<int>(i);
    r.pose = poses[i];
    r.step_length = config.step_length;
    r.sensor_range = config.sensor_range;
    r.window_scale = config.window_scale;
    validate_robot(r, s.world);
    s.robots.push_back(r);
  }
  return s;
}

std::unique_ptr<Predictor> make_predictor(const PredictorConfig& config,
                                          const TrinaryGrid& world) {
  if (config.type == "null") return std::make_unique<NullPredictor>();
  if (config.type == "oracle") return std::make_unique<OraclePredictor>(world);
  if (config.type == "dilate") return std::make_unique<DilatePredictor>(config.radius);
  if (config.type == "remote") {
    return std::make_unique<RemotePredictor>(Endpoint::parse(config.endpoint), config.timeout,
                                             config.parameter_count);
  }
  config_error("unknown predictor type '" + config.type + "'");
}

}  // namespace pex
