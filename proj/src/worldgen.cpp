#include "pex/worldgen.hpp"

#include <algorithm>
#include <vector>

#include "pex/rng.hpp"

namespace pex {

namespace {

struct Room {
  int col0, row0, col1, row1;  // inclusive interior bounds

  Cell center() const { return {(col0 + col1) / 2, (row0 + row1) / 2}; }
  // Overlap test with a one-cell wall kept between rooms.
  bool touches(const Room& o) const {
    return col0 <= o.col1 + 1 && o.col0 <= col1 + 1 && row0 <= o.row1 + 1 &&
           o.row0 <= row1 + 1;
  }
};

void carve(TrinaryGrid& g, int col, int row) {
  if (col >= 1 && row >= 1 && col <= g.width() - 2 && row <= g.height() - 2) {
    g[Cell{col, row}] = CellClass::kFree;
  }
}

void carve_corridor(TrinaryGrid& g, Cell a, Cell b, int width, bool horizontal_first) {
  const Cell corner = horizontal_first ? Cell{b.col, a.row} : Cell{a.col, b.row};
  auto segment = [&](Cell p, Cell q) {
    for (int r = std::min(p.row, q.row); r <= std::max(p.row, q.row); ++r) {
      for (int c = std::min(p.col, q.col); c <= std::max(p.col, q.col); ++c) {
        for (int w = 0; w < width; ++w) {
          for (int v = 0; v < width; ++v) carve(g, c + w, r + v);
        }
      }
    }
  };
  segment(a, corner);
  segment(corner, b);
}

}  // namespace

TrinaryGrid generate_world(int width, int height, int room_count, std::uint64_t seed,
                           double resolution) {
  if (width < kMinWorldSide || height < kMinWorldSide) {
    throw Error(ErrorCode::kConfigError, "world sides must be >= 32");
  }
  if (room_count < 1) {
    throw Error(ErrorCode::kConfigError, "room_count must be >= 1");
  }
  Rng rng(seed);
  TrinaryGrid g(width, height, CellClass::kObstacle, resolution);

  const int max_w = std::max(4, (width - 2) / 3);
  const int max_h = std::max(4, (height - 2) / 3);
  constexpr int kAttemptsPerRoom = 64;
  std::vector<Room> rooms;
  for (int k = 0; k < room_count; ++k) {
    for (int attempt = 0; attempt < kAttemptsPerRoom; ++attempt) {
      const int w = static_cast<int>(rng.uniform_int(4, max_w));
      const int h = static_cast<int>(rng.uniform_int(4, max_h));
      const int c0 = static_cast<int>(rng.uniform_int(1, width - 1 - w));
      const int r0 = static_cast<int>(rng.uniform_int(1, height - 1 - h));
      const Room room{c0, r0, c0 + w - 1, r0 + h - 1};
      if (std::none_of(rooms.begin(), rooms.end(),
                       [&](const Room& o) { return room.touches(o); })) {
        rooms.push_back(room);
        break;
      }
    }
  }
  for (const Room& room : rooms) {
    for (int r = room.row0; r <= room.row1; ++r) {
      for (int c = room.col0; c <= room.col1; ++c) g[Cell{c, r}] = CellClass::kFree;
    }
  }
  // Room k joins the nearest of rooms 0..k-1 (Manhattan between centers).
  for (std::size_t k = 1; k < rooms.size(); ++k) {
    const Cell a = rooms[k].center();
    std::size_t best = 0;
    int best_d = -1;
    for (std::size_t j = 0; j < k; ++j) {
      const Cell b = rooms[j].center();
      const int d = std::abs(a.col - b.col) + std::abs(a.row - b.row);
      if (best_d < 0 || d < best_d) {
        best_d = d;
        best = j;
      }
    }
    const int corridor_width = static_cast<int>(rng.uniform_int(1, 2));
    const bool horizontal_first = rng.uniform_int(0, 1) == 1;
    carve_corridor(g, a, rooms[best].center(), corridor_width, horizontal_first);
  }
  return g;
}

}  // namespace pex
