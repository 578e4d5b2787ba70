#include "pex/sensesim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int step_sign(double d) { return d > 0.0 ? 1 : (d < 0.0 ? -1 : 0); }

// Distance along the beam to the first cell border on one axis.
double first_crossing(double origin, int cell, int step, double d) {
  if (step > 0) return (cell + 1 - origin) / d;
  if (step < 0) return (origin - cell) / -d;
  return kInf;
}

}  // namespace

void validate_robot(const RobotState& robot, const TrinaryGrid& world) {
  if (!(robot.step_length > 0.0) || !(robot.sensor_range > 0.0) ||
      !(robot.window_scale > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "robot step_length, sensor_range and window_scale must be > 0");
  }
  const Cell c = world.cell_of(robot.pose);
  if (!world.in_bounds(c)) {
    throw Error(ErrorCode::kPoseOutOfBounds, "robot pose outside world");
  }
  if (world[c] != CellClass::kFree) {
    throw Error(ErrorCode::kPoseInObstacle, "robot pose is not on a free cell");
  }
}

int LidarConfig::max_steps(double resolution) const {
  return static_cast<int>(std::floor(range / resolution / kBeamSampleSpacing + 1e-9)) + 1;
}

std::vector<Observation> cast_ray(const TrinaryGrid& world, Cell origin,
                                  double heading, double range_cells) {
  std::vector<Observation> seen;
  const double dx = std::cos(heading);
  const double dy = std::sin(heading);
  const double ox = origin.col + 0.5;
  const double oy = origin.row + 0.5;
  const long last_sample =
      range_cells > 0.0
          ? static_cast<long>(std::floor(range_cells / kBeamSampleSpacing + 1e-9))
          : 0;

  auto sample_cell = [&](long k) {
    const double t = static_cast<double>(k) * kBeamSampleSpacing;
    return Cell{static_cast<int>(std::floor(ox + t * dx)),
                static_cast<int>(std::floor(oy + t * dy))};
  };

  const int step_c = step_sign(dx);
  const int step_r = step_sign(dy);
  const double delta_c = step_c != 0 ? 1.0 / std::abs(dx) : kInf;
  const double delta_r = step_r != 0 ? 1.0 / std::abs(dy) : kInf;
  double next_c = first_crossing(ox, origin.col, step_c, dx);
  double next_r = first_crossing(oy, origin.row, step_r, dy);

  Cell cell = origin;
  double t_enter = 0.0;
  while (true) {
    const double t_exit = std::min(next_c, next_r);
    const long k_lo =
        std::max(0L, static_cast<long>(std::floor(t_enter / kBeamSampleSpacing)) - 1);
    if (k_lo > last_sample) break;
    const long k_hi =
        t_exit == kInf
            ? last_sample
            : std::min(last_sample,
                       static_cast<long>(std::ceil(t_exit / kBeamSampleSpacing)) + 1);

    bool sampled = false;
    for (long k = k_lo; k <= k_hi && !sampled; ++k) {
      sampled = sample_cell(k) == cell;
    }
    if (sampled) {
      if (!world.in_bounds(cell)) break;
      const CellClass truth = world[cell];
      if (truth == CellClass::kUncertain) break;
      seen.push_back({cell, truth});
      if (truth == CellClass::kObstacle) break;
    }
    if (t_exit == kInf) break;

    if (next_c < next_r) {
      cell.col += step_c;
      t_enter = next_c;
      next_c += delta_c;
    } else {
      cell.row += step_r;
      t_enter = next_r;
      next_r += delta_r;
    }
  }
  return seen;
}

std::vector<Observation> raycast(const TrinaryGrid& world, Vec2 pose,
                                 const LidarConfig& config) {
  if (config.ray_count < 4) {
    throw Error(ErrorCode::kInvalidArgument, "ray_count must be >= 4");
  }
  const Cell start = world.cell_of(pose);
  if (!world.in_bounds(start)) {
    throw Error(ErrorCode::kPoseOutOfBounds, "pose outside world");
  }
  if (world[start] != CellClass::kFree) {
    throw Error(ErrorCode::kPoseInObstacle, "pose is not on a free cell");
  }
  const double range_cells = config.range / world.resolution();
  std::vector<Observation> all;
  for (int i = 0; i < config.ray_count; ++i) {
    const double heading = 2.0 * std::numbers::pi * i / config.ray_count;
    auto beam = cast_ray(world, start, heading, range_cells);
    all.insert(all.end(), beam.begin(), beam.end());
  }
  std::sort(all.begin(), all.end(), [](const Observation& a, const Observation& b) {
    return a.cell < b.cell;
  });
  all.erase(std::unique(all.begin(), all.end(),
                        [](const Observation& a, const Observation& b) {
                          return a.cell == b.cell;
                        }),
            all.end());
  return all;
}

TrinaryGrid integrate_observation(TrinaryGrid obs_map,
                                  std::span<const Observation> observations) {
  for (const auto& o : observations) {
    if (!obs_map.in_bounds(o.cell)) {
      throw Error(ErrorCode::kCellOutOfBounds, "observation outside map");
    }
  }
  for (const auto& o : observations) {
    CellClass& current = obs_map[o.cell];
    if (o.value == CellClass::kUncertain) continue;
    if (current == CellClass::kUncertain || o.value == CellClass::kObstacle) {
      current = o.value;
    }
  }
  return obs_map;
}

int window_crop_side(const RobotState& robot, double resolution) {
  const double sigma = robot.window_scale * 2.0 * robot.sensor_range;
  return std::max(1, static_cast<int>(std::lround(sigma / resolution)));
}

int window_to_crop_index(int window_index, int crop_side, int target_side) {
  return static_cast<int>((2LL * window_index + 1) * crop_side / (2LL * target_side));
}

int crop_to_window_index(int crop_index, int crop_side, int target_side) {
  return static_cast<int>((2LL * crop_index + 1) * target_side / (2LL * crop_side));
}

ObservationWindow extract_window(const TrinaryGrid& obs_map,
                                 const RobotState& robot, int target_side) {
  if (target_side < 8) {
    throw Error(ErrorCode::kInvalidArgument, "window side must be >= 8");
  }
  const int crop = window_crop_side(robot, obs_map.resolution());
  const Cell robot_cell = obs_map.cell_of(robot.pose);
  const Cell offset{robot_cell.col - crop / 2, robot_cell.row - crop / 2};

  const double res = obs_map.resolution() * crop / target_side;
  const Vec2 origin{obs_map.origin().x + offset.col * obs_map.resolution(),
                    obs_map.origin().y + offset.row * obs_map.resolution()};
  TrinaryGrid grid(target_side, target_side, CellClass::kUncertain, res, origin);
  for (int r = 0; r < target_side; ++r) {
    const int src_r = offset.row + window_to_crop_index(r, crop, target_side);
    for (int c = 0; c < target_side; ++c) {
      const Cell src{offset.col + window_to_crop_index(c, crop, target_side), src_r};
      if (obs_map.in_bounds(src)) grid[Cell{c, r}] = obs_map[src];
    }
  }
  const Cell center{crop_to_window_index(crop / 2, crop, target_side),
                    crop_to_window_index(crop / 2, crop, target_side)};
  return {std::move(grid), center, offset, crop};
}

RobotState step_along(std::span<const Vec2> path, const RobotState& robot) {
  if (path.empty()) {
    throw Error(ErrorCode::kEmptyPath, "cannot step along an empty path");
  }
  RobotState next = robot;
  double remaining = robot.step_length;
  Vec2 from = robot.pose;
  for (const Vec2& to : path) {
    const double seg = distance(from, to);
    if (seg >= remaining && seg > 0.0) {
      next.pose = from + (remaining / seg) * (to - from);
      return next;
    }
    remaining -= seg;
    from = to;
  }
  next.pose = path.back();
  return next;
}

}  // namespace pex
