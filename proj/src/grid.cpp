#include "pex/grid.hpp"

#include <algorithm>
#include <cmath>

namespace pex {

namespace {

constexpr std::uint8_t kOn = 255;

double logit(double p) {
  p = std::clamp(p, kFusionEpsilon, 1.0 - kFusionEpsilon);
  return std::log(p / (1.0 - p));
}

}  // namespace

ChannelStack encode_channels(const TrinaryGrid& grid) {
  ChannelStack stack;
  stack.width = grid.width();
  stack.height = grid.height();
  stack.free.assign(grid.size(), 0);
  stack.uncertain.assign(grid.size(), 0);
  stack.obstacle.assign(grid.size(), 0);
  const auto cells = grid.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    switch (cells[i]) {
      case CellClass::kFree: stack.free[i] = kOn; break;
      case CellClass::kUncertain: stack.uncertain[i] = kOn; break;
      case CellClass::kObstacle: stack.obstacle[i] = kOn; break;
    }
  }
  return stack;
}

TrinaryGrid decode_channels(const ChannelStack& stack, double resolution,
                            Vec2 origin) {
  const std::size_t n = static_cast<std::size_t>(stack.width) *
                        static_cast<std::size_t>(stack.height);
  if (stack.free.size() != n || stack.uncertain.size() != n ||
      stack.obstacle.size() != n) {
    throw Error(ErrorCode::kNotOneHot, "plane sizes do not match dimensions");
  }
  TrinaryGrid grid(stack.width, stack.height, CellClass::kUncertain,
                   resolution, origin);
  auto cells = grid.cells();
  for (std::size_t i = 0; i < n; ++i) {
    const int hot = (stack.free[i] == kOn) + (stack.uncertain[i] == kOn) +
                    (stack.obstacle[i] == kOn);
    const int cold = (stack.free[i] == 0) + (stack.uncertain[i] == 0) +
                     (stack.obstacle[i] == 0);
    if (hot != 1 || cold != 2) {
      throw Error(ErrorCode::kNotOneHot,
                  "cell " + std::to_string(i) + " is not one-hot");
    }
    if (stack.free[i] == kOn) {
      cells[i] = CellClass::kFree;
    } else if (stack.obstacle[i] == kOn) {
      cells[i] = CellClass::kObstacle;
    } else {
      cells[i] = CellClass::kUncertain;
    }
  }
  return grid;
}

void validate_thresholds(Thresholds t) {
  if (!(t.tau_free >= 0.0 && t.tau_free < t.tau_obs && t.tau_obs <= 1.0)) {
    throw Error(ErrorCode::kInvalidThresholds,
                "require 0 <= tau_free < tau_obs <= 1");
  }
}

CellClass threshold_value(double p, Thresholds t) {
  if (p <= t.tau_free) return CellClass::kFree;
  if (p >= t.tau_obs) return CellClass::kObstacle;
  return CellClass::kUncertain;
}

TrinaryGrid threshold(const ProbabilityGrid& prob, Thresholds thresholds) {
  validate_thresholds(thresholds);
  TrinaryGrid out(prob.geometry(), CellClass::kUncertain);
  auto dst = out.cells();
  const auto src = prob.cells();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = threshold_value(src[i], thresholds);
  }
  return out;
}

double lift_value(CellClass c) {
  switch (c) {
    case CellClass::kFree: return 0.0;
    case CellClass::kObstacle: return 1.0;
    case CellClass::kUncertain: break;
  }
  return 0.5;
}

ProbabilityGrid lift(const TrinaryGrid& grid) {
  ProbabilityGrid out(grid.geometry(), 0.5);
  auto dst = out.cells();
  const auto src = grid.cells();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = lift_value(src[i]);
  return out;
}

double fuse_probability(double a, double b) {
  if (a == 0.5) return b;
  if (b == 0.5) return a;
  const double l = logit(a) + logit(b);
  return 1.0 / (1.0 + std::exp(-l));
}

ProbabilityGrid fuse_bayes(const ProbabilityGrid& a, const ProbabilityGrid& b) {
  if (!a.same_geometry(b)) {
    throw Error(ErrorCode::kGridMismatch, "fusion inputs differ in geometry");
  }
  ProbabilityGrid out(a.geometry(), 0.5);
  auto dst = out.cells();
  const auto pa = a.cells();
  const auto pb = b.cells();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = fuse_probability(pa[i], pb[i]);
  }
  return out;
}

void validate_probabilities(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "probability outside [0,1] or not finite");
    }
  }
}

std::size_t count_class(const TrinaryGrid& grid, CellClass c) {
  const auto cells = grid.cells();
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), c));
}

}  // namespace pex
