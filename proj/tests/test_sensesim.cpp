#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>
#include <set>

#include "pex/sensesim.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace pex;
using pex::testing::error_of;
using pex::testing::grid_from;

namespace {

std::set<std::pair<Cell, CellClass>> as_set(const std::vector<Observation>& obs) {
  std::set<std::pair<Cell, CellClass>> out;
  for (const auto& o : obs) out.insert({o.cell, o.value});
  return out;
}

RobotState robot_at(const TrinaryGrid& g, Cell c, double range = 1.0) {
  RobotState r;
  r.pose = g.center_of(c);
  r.sensor_range = range;
  return r;
}

}  // namespace

TEST_CASE("unobstructed eastward beam") {
  const TrinaryGrid world(21, 21, CellClass::kFree, 1.0);
  const auto beam = cast_ray(world, Cell{10, 10}, 0.0, 5.0);
  std::vector<Cell> cells;
  for (const auto& o : beam) {
    CHECK(o.value == CellClass::kFree);
    cells.push_back(o.cell);
  }
  CHECK(cells == std::vector<Cell>{{10, 10}, {11, 10}, {12, 10}, {13, 10}, {14, 10}, {15, 10}});
}

TEST_CASE("beam stops at the first obstacle") {
  TrinaryGrid world(21, 21, CellClass::kFree, 1.0);
  world[Cell{13, 10}] = CellClass::kObstacle;
  world[Cell{15, 10}] = CellClass::kObstacle;
  const auto beam = cast_ray(world, Cell{10, 10}, 0.0, 8.0);
  REQUIRE(beam.size() == 4);
  CHECK(beam[1] == Observation{{11, 10}, CellClass::kFree});
  CHECK(beam[2] == Observation{{12, 10}, CellClass::kFree});
  CHECK(beam[3] == Observation{{13, 10}, CellClass::kObstacle});
}

TEST_CASE("uncertain truth and map edges end a beam unreported") {
  TrinaryGrid world(8, 3, CellClass::kFree, 1.0);
  world[Cell{3, 1}] = CellClass::kUncertain;
  world[Cell{5, 1}] = CellClass::kObstacle;
  CHECK(cast_ray(world, Cell{1, 1}, 0.0, 6.0).size() == 2);
  CHECK(cast_ray(world, Cell{1, 1}, std::numbers::pi, 6.0).size() == 2);
}

TEST_CASE("range below one cell only sees the robot cell") {
  const TrinaryGrid world(9, 9, CellClass::kFree, 0.05);
  const auto seen = raycast(world, world.center_of(Cell{4, 4}), LidarConfig{360, 0.02});
  REQUIRE(seen.size() == 1);
  CHECK(seen[0] == Observation{{4, 4}, CellClass::kFree});
}

TEST_CASE("raycast pose checks") {
  TrinaryGrid world(5, 5, CellClass::kFree, 1.0);
  world[Cell{2, 2}] = CellClass::kObstacle;
  CHECK(error_of([&] { raycast(world, Vec2{-1.0, 2.0}, {}); }) == ErrorCode::kPoseOutOfBounds);
  CHECK(error_of([&] { raycast(world, Vec2{2.5, 2.5}, {}); }) == ErrorCode::kPoseInObstacle);
  CHECK(error_of([&] { raycast(world, Vec2{0.5, 0.5}, {3, 1.0}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("raycast equals a fine-step ray marcher per ray") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    TrinaryGrid world = oracle::random_trinary(rng, 32, 32, 0.75, 0.2);
    const Cell origin{static_cast<int>(rng.uniform_int(0, 31)),
                      static_cast<int>(rng.uniform_int(0, 31))};
    world[origin] = CellClass::kFree;
    const double range = rng.uniform(0.5, 14.0);
    const int rays = static_cast<int>(rng.uniform_int(4, 180));
    for (int i = 0; i < rays; ++i) {
      const double heading = 2.0 * std::numbers::pi * i / rays;
      const auto beam = as_set(cast_ray(world, origin, heading, range));
      std::set<std::pair<Cell, CellClass>> marched;
      const long last = static_cast<long>(std::floor(range / 0.1 + 1e-9));
      for (long k = 0; k <= last; ++k) {
        const double t = static_cast<double>(k) * 0.1;
        const Cell c{static_cast<int>(std::floor(origin.col + 0.5 + t * std::cos(heading))),
                     static_cast<int>(std::floor(origin.row + 0.5 + t * std::sin(heading)))};
        if (!world.in_bounds(c) || world[c] == CellClass::kUncertain) break;
        marched.insert({c, world[c]});
        if (world[c] == CellClass::kObstacle) break;
      }
      CHECK(beam == marched);
    }
  }
}

TEST_CASE("integrate_observation precedence") {
  TrinaryGrid map(3, 3, CellClass::kUncertain);
  const std::vector<Observation> one{{{1, 1}, CellClass::kFree}};
  map = integrate_observation(map, one);
  CHECK(map[Cell{1, 1}] == CellClass::kFree);
  CHECK(count_class(map, CellClass::kUncertain) == 8);
  CHECK(integrate_observation(map, one) == map);

  const std::vector<Observation> wall{{{1, 1}, CellClass::kObstacle}};
  map = integrate_observation(map, wall);
  CHECK(map[Cell{1, 1}] == CellClass::kObstacle);
  map = integrate_observation(map, one);
  CHECK(map[Cell{1, 1}] == CellClass::kObstacle);
  const std::vector<Observation> unknown{{{1, 1}, CellClass::kUncertain}};
  CHECK(integrate_observation(map, unknown)[Cell{1, 1}] == CellClass::kObstacle);

  const std::vector<Observation> outside{{{3, 0}, CellClass::kFree}};
  CHECK(error_of([&] { integrate_observation(map, outside); }) == ErrorCode::kCellOutOfBounds);
}

TEST_CASE("observed-cell count never decreases") {
  Rng rng(12);
  const TrinaryGrid world = oracle::random_trinary(rng, 24, 24, 0.8, 0.2);
  TrinaryGrid map(world.geometry(), CellClass::kUncertain);
  std::size_t observed = 0;
  for (int i = 0; i < 30; ++i) {
    const Cell c{static_cast<int>(rng.uniform_int(0, 23)), static_cast<int>(rng.uniform_int(0, 23))};
    if (world[c] != CellClass::kFree) continue;
    map = integrate_observation(map, raycast(world, world.center_of(c), {90, 0.3}));
    const std::size_t now = map.size() - count_class(map, CellClass::kUncertain);
    CHECK(now >= observed);
    observed = now;
  }
}

TEST_CASE("window crop side follows window_scale and range") {
  RobotState r;
  r.sensor_range = 1.0;
  r.window_scale = 1.0;
  CHECK(window_crop_side(r, 0.05) == 40);
  r.window_scale = 0.5;
  CHECK(window_crop_side(r, 0.05) == 20);
  r.sensor_range = 0.001;
  CHECK(window_crop_side(r, 0.05) == 1);
}

TEST_CASE("exact crop when the crop side equals the target side") {
  Rng rng(13);
  const TrinaryGrid map = oracle::random_trinary(rng, 40, 40, 0.4, 0.3);
  const RobotState robot = robot_at(map, Cell{20, 17}, 0.5);  // crop 20 cells
  const ObservationWindow w = extract_window(map, robot, 20);
  CHECK(w.crop_side == 20);
  CHECK(w.world_offset == Cell{10, 7});
  CHECK(w.center == Cell{10, 10});
  CHECK(w.grid.resolution() == doctest::Approx(map.resolution()));
  for (int r = 0; r < 20; ++r) {
    for (int c = 0; c < 20; ++c) CHECK(w.grid[Cell{c, r}] == map[Cell{10 + c, 7 + r}]);
  }
}

TEST_CASE("window near a corner is padded with Uncertain") {
  const TrinaryGrid map(30, 30, CellClass::kFree);
  const ObservationWindow w = extract_window(map, robot_at(map, Cell{0, 0}, 0.5), 20);
  CHECK(w.world_offset == Cell{-10, -10});
  CHECK(w.grid[Cell{0, 0}] == CellClass::kUncertain);
  CHECK(w.grid[Cell{9, 9}] == CellClass::kUncertain);
  CHECK(w.grid[Cell{10, 10}] == CellClass::kFree);
  CHECK(count_class(w.grid, CellClass::kFree) == 100);
}

TEST_CASE("extract_window always yields target_side squared cells") {
  Rng rng(14);
  const TrinaryGrid map = oracle::random_trinary(rng, 50, 30, 0.5, 0.3);
  for (int i = 0; i < 50; ++i) {
    RobotState r = robot_at(map, Cell{static_cast<int>(rng.uniform_int(0, 49)),
                                      static_cast<int>(rng.uniform_int(0, 29))});
    r.sensor_range = rng.uniform(0.05, 2.0);
    r.window_scale = rng.uniform(0.3, 2.0);
    const int side = static_cast<int>(rng.uniform_int(8, 80));
    const ObservationWindow w = extract_window(map, r, side);
    CHECK(w.grid.width() == side);
    CHECK(w.grid.height() == side);
    CHECK(w.grid.size() == static_cast<std::size_t>(side) * side);
    CHECK(w.grid.in_bounds(w.center));
  }
  CHECK(error_of([&] { extract_window(map, robot_at(map, Cell{1, 1}), 7); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("index maps invert when upsampling") {
  for (int crop = 1; crop <= 64; ++crop) {
    for (int target = crop; target <= 96; ++target) {
      for (int j = 0; j < crop; ++j) {
        const int i = crop_to_window_index(j, crop, target);
        REQUIRE(i >= 0);
        REQUIRE(i < target);
        REQUIRE(window_to_crop_index(i, crop, target) == j);
      }
    }
  }
}

TEST_CASE("paste-back of an unmodified window reproduces the crop") {
  Rng rng(15);
  const TrinaryGrid map = oracle::random_trinary(rng, 48, 48, 0.4, 0.3);
  for (int side : {20, 33, 64, 256}) {
    const RobotState robot = robot_at(map, Cell{5, 40}, 0.5);
    const ObservationWindow w = extract_window(map, robot, side);
    TrinaryGrid dest(map.geometry(), CellClass::kUncertain);
    paste_window(dest, w, w.grid);
    for (int r = 0; r < w.crop_side; ++r) {
      for (int c = 0; c < w.crop_side; ++c) {
        const Cell g{w.world_offset.col + c, w.world_offset.row + r};
        if (map.in_bounds(g)) CHECK(dest[g] == map[g]);
      }
    }
  }
  const ObservationWindow w = extract_window(map, robot_at(map, Cell{5, 5}, 0.5), 20);
  TrinaryGrid dest(map.geometry(), CellClass::kUncertain);
  CHECK(error_of([&] { paste_window(dest, w, TrinaryGrid(19, 19, CellClass::kFree)); }) ==
        ErrorCode::kGridMismatch);
}

TEST_CASE("step_along examples") {
  RobotState r;
  r.step_length = 1.0;
  r.pose = {0.0, 0.0};
  const std::vector<Vec2> straight{{10.0, 0.0}};
  CHECK(step_along(straight, r).pose == Vec2{1.0, 0.0});

  const std::vector<Vec2> shorter{{0.4, 0.0}};
  CHECK(step_along(shorter, r).pose == Vec2{0.4, 0.0});

  const std::vector<Vec2> corner{{0.6, 0.0}, {0.6, 5.0}};
  const Vec2 p = step_along(corner, r).pose;
  CHECK(p.x == doctest::Approx(0.6));
  CHECK(p.y == doctest::Approx(0.4));

  CHECK(error_of([&] { step_along(std::vector<Vec2>{}, r); }) == ErrorCode::kEmptyPath);
}

TEST_CASE("step_along advances exactly L of arc length") {
  Rng rng(16);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vec2> path;
    Vec2 cur{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    RobotState r;
    r.pose = cur;
    r.step_length = rng.uniform(0.05, 3.0);
    double total = 0.0;
    for (int k = 0; k < 6; ++k) {
      const Vec2 next{cur.x + rng.uniform(-1, 1), cur.y + rng.uniform(-1, 1)};
      total += distance(cur, next);
      path.push_back(next);
      cur = next;
    }
    const Vec2 moved = step_along(path, r).pose;
    // Arc length to `moved` along the polyline by dense interpolation.
    double arc = 0.0;
    double best = std::numeric_limits<double>::infinity();
    double arc_at_best = 0.0;
    Vec2 from = r.pose;
    for (const Vec2& to : path) {
      const double seg = distance(from, to);
      constexpr int kSteps = 20000;
      for (int s = 0; s <= kSteps; ++s) {
        const double f = static_cast<double>(s) / kSteps;
        const double d = distance(from + f * (to - from), moved);
        if (d < best) {
          best = d;
          arc_at_best = arc + f * seg;
        }
      }
      arc += seg;
      from = to;
    }
    CHECK(best < 1e-3);
    CHECK(arc_at_best == doctest::Approx(std::min(r.step_length, total)).epsilon(1e-3));

    // Exact arc length: locate the segment holding `moved`.
    double exact = -1.0;
    double before = 0.0;
    from = r.pose;
    for (const Vec2& to : path) {
      const double seg = distance(from, to);
      if (exact < 0.0 && distance(from, moved) + distance(moved, to) - seg < 1e-12) {
        exact = before + distance(from, moved);
      }
      before += seg;
      from = to;
    }
    CHECK(std::abs(exact - std::min(r.step_length, total)) <= 1e-9);
  }
}

TEST_CASE("validate_robot") {
  TrinaryGrid world(4, 4, CellClass::kFree, 1.0);
  world[Cell{1, 1}] = CellClass::kObstacle;
  RobotState r;
  r.pose = {0.5, 0.5};
  validate_robot(r, world);
  r.step_length = 0.0;
  CHECK(error_of([&] { validate_robot(r, world); }) == ErrorCode::kInvalidArgument);
  r.step_length = 1.0;
  r.pose = {1.5, 1.5};
  CHECK(error_of([&] { validate_robot(r, world); }) == ErrorCode::kPoseInObstacle);
  r.pose = {4.5, 0.5};
  CHECK(error_of([&] { validate_robot(r, world); }) == ErrorCode::kPoseOutOfBounds);
}
