#pragma once

#include <span>
#include <vector>

#include "pex/grid.hpp"

namespace pex {

// Holonomic point robot. Lengths in meters.
struct RobotState {
  int id = 0;
  Vec2 pose;
  double step_length = 1.0;   // distance advanced per tick
  double sensor_range = 1.0;  // lidar radius
  double window_scale = 1.0;  // observation window side = scale * 2 * range

  friend bool operator==(const RobotState&, const RobotState&) = default;
};

// Throws kInvalidArgument on non-positive lengths, kPoseOutOfBounds /
// kPoseInObstacle when the pose is not on a free cell of `world`.
void validate_robot(const RobotState& robot, const TrinaryGrid& world);

struct LidarConfig {
  int ray_count = 360;  // full 360 degree fan
  double range = 1.0;   // meters

  // Beam samples per ray for a grid of the given resolution.
  int max_steps(double resolution) const;
};

// Beams are sampled every kBeamSampleSpacing cells of range; a cell is seen
// by a beam when one of the beam's range samples falls inside it.
inline constexpr double kBeamSampleSpacing = 0.1;

struct Observation {
  Cell cell;
  CellClass value = CellClass::kUncertain;

  friend bool operator==(Observation, Observation) = default;
};

// One beam from the center of `origin` along `heading` (radians, 0 = +col,
// pi/2 = +row). Walks cells outward with an Amanatides-Woo traversal. Free
// cells are reported until the first obstacle, which is reported and ends
// the beam. Uncertain or out-of-bounds cells end the beam unreported.
std::vector<Observation> cast_ray(const TrinaryGrid& world, Cell origin,
                                  double heading, double range_cells);

// Full fan from the robot cell. Result is deduplicated and sorted by cell.
std::vector<Observation> raycast(const TrinaryGrid& world, Vec2 pose,
                                 const LidarConfig& config);

// Observed cells overwrite Uncertain, an obstacle observation overwrites
// Free, and nothing is ever reverted to Uncertain.
TrinaryGrid integrate_observation(TrinaryGrid obs_map,
                                  std::span<const Observation> observations);

struct ObservationWindow {
  TrinaryGrid grid;   // target_side x target_side
  Cell center;        // robot cell in window coordinates
  Cell world_offset;  // global cell of crop (0,0); may be negative
  int crop_side = 0;  // side of the cropped square in global cells
};

// round(window_scale * 2 * sensor_range / resolution), at least 1.
int window_crop_side(const RobotState& robot, double resolution);

// Maps between crop and window indices with nearest-neighbor sampling.
int window_to_crop_index(int window_index, int crop_side, int target_side);
int crop_to_window_index(int crop_index, int crop_side, int target_side);

ObservationWindow extract_window(const TrinaryGrid& obs_map,
                                 const RobotState& robot, int target_side);

// Writes `values` (window-sized) back over the crop region of `dest`; crop
// cells outside `dest` are skipped.
template <typename T>
void paste_window(Grid<T>& dest, const ObservationWindow& window,
                  const Grid<T>& values) {
  const int target = window.grid.width();
  if (values.width() != target || values.height() != target) {
    throw Error(ErrorCode::kGridMismatch, "window values have wrong side");
  }
  for (int r = 0; r < window.crop_side; ++r) {
    for (int c = 0; c < window.crop_side; ++c) {
      const Cell global{window.world_offset.col + c, window.world_offset.row + r};
      if (!dest.in_bounds(global)) continue;
      const Cell local{crop_to_window_index(c, window.crop_side, target),
                       crop_to_window_index(r, window.crop_side, target)};
      dest[global] = values[local];
    }
  }
}

// Advances the robot by exactly step_length of arc length along the
// polyline (pose, path...), or to the end of the path if it is shorter.
RobotState step_along(std::span<const Vec2> path, const RobotState& robot);

}  // namespace pex
