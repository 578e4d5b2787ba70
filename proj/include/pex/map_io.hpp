#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "pex/grid.hpp"

namespace pex {

// 8-bit grayscale raster, row-major, row 0 first.
struct Image8 {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  friend bool operator==(const Image8&, const Image8&) = default;
};

// Pixel classes for map files: v <= 50 is an obstacle, v > 205 is free,
// anything in between (including the 205 "unknown" shade) is uncertain.
inline constexpr std::uint8_t kObstacleMaxPixel = 50;
inline constexpr std::uint8_t kUnknownPixel = 205;
inline constexpr std::uint8_t kFreePixel = 254;

CellClass classify_pixel(std::uint8_t v);
std::uint8_t class_pixel(CellClass c);
// round(255 * (1 - p))
std::uint8_t probability_pixel(double p);

Image8 read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Image8& image);

// `map.pgm` -> `map.meta.json`
std::filesystem::path sidecar_path(const std::filesystem::path& pgm_path);

struct MapMetadata {
  double resolution = kDefaultResolution;
  Vec2 origin;
};

std::optional<MapMetadata> read_sidecar(const std::filesystem::path& pgm_path);
void write_sidecar(const std::filesystem::path& pgm_path, const MapMetadata& meta);

// Loads a P5 map plus optional sidecar metadata.
TrinaryGrid load_map(const std::filesystem::path& path);

// Writes a P5 snapshot and its sidecar. Trinary cells use {0, 205, 254}.
void save_snapshot(const TrinaryGrid& grid, const std::filesystem::path& path);
void save_snapshot(const ProbabilityGrid& grid, const std::filesystem::path& path);

Image8 to_image(const TrinaryGrid& grid);
Image8 to_image(const ProbabilityGrid& grid);

}  // namespace pex
