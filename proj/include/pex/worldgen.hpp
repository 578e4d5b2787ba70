#pragma once

#include <cstdint>

#include "pex/grid.hpp"

namespace pex {

inline constexpr int kMinWorldSide = 32;

// Random floor plan: border walls, up to `room_count` non-overlapping
// rectangular rooms (walls between them), joined by L-shaped corridors 1 or
// 2 cells wide. All free cells form one 8- and 4-connected component.
// Throws kConfigError for sides < 32 or room_count < 1.
TrinaryGrid generate_world(int width, int height, int room_count, std::uint64_t seed,
                           double resolution = kDefaultResolution);

}  // namespace pex
