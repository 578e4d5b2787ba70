#include "pex/map_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "json.hpp"

namespace pex {

namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string next_token(const std::string& data, std::size_t& pos) {
  while (pos < data.size()) {
    const auto ch = static_cast<unsigned char>(data[pos]);
    if (ch == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else if (std::isspace(ch)) {
      ++pos;
    } else {
      break;
    }
  }
  std::string token;
  while (pos < data.size() &&
         !std::isspace(static_cast<unsigned char>(data[pos])) &&
         data[pos] != '#') {
    token.push_back(data[pos++]);
  }
  return token;
}

int parse_positive(const std::string& token, const char* what) {
  if (token.empty() || token.size() > 9) {
    throw Error(ErrorCode::kMalformedPgm, std::string("bad ") + what);
  }
  for (char ch : token) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      throw Error(ErrorCode::kMalformedPgm, std::string("bad ") + what);
    }
  }
  const int value = std::stoi(token);
  if (value <= 0) {
    throw Error(ErrorCode::kMalformedPgm, std::string("bad ") + what);
  }
  return value;
}

}  // namespace

CellClass classify_pixel(std::uint8_t v) {
  if (v <= kObstacleMaxPixel) return CellClass::kObstacle;
  if (v > kUnknownPixel) return CellClass::kFree;
  return CellClass::kUncertain;
}

std::uint8_t class_pixel(CellClass c) {
  switch (c) {
    case CellClass::kFree: return kFreePixel;
    case CellClass::kObstacle: return 0;
    case CellClass::kUncertain: break;
  }
  return kUnknownPixel;
}

std::uint8_t probability_pixel(double p) {
  const double v = std::round(255.0 * (1.0 - std::clamp(p, 0.0, 1.0)));
  return static_cast<std::uint8_t>(v);
}

Image8 read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  if (next_token(data, pos) != "P5") {
    throw Error(ErrorCode::kMalformedPgm,
                path.string() + ": only binary P5 is supported");
  }
  Image8 image;
  image.width = parse_positive(next_token(data, pos), "width");
  image.height = parse_positive(next_token(data, pos), "height");
  if (parse_positive(next_token(data, pos), "maxval") != 255) {
    throw Error(ErrorCode::kMalformedPgm, path.string() + ": maxval must be 255");
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[pos]))) {
    throw Error(ErrorCode::kMalformedPgm, path.string() + ": truncated header");
  }
  ++pos;
  const std::size_t n = static_cast<std::size_t>(image.width) *
                        static_cast<std::size_t>(image.height);
  if (data.size() - pos < n) {
    throw Error(ErrorCode::kMalformedPgm, path.string() + ": truncated raster");
  }
  image.pixels.assign(data.begin() + static_cast<std::ptrdiff_t>(pos),
                      data.begin() + static_cast<std::ptrdiff_t>(pos + n));
  return image;
}

void write_pgm(const std::filesystem::path& path, const Image8& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) {
    throw Error(ErrorCode::kIoError, "write failed for " + path.string());
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& pgm_path) {
  auto p = pgm_path;
  p.replace_extension(".meta.json");
  return p;
}

std::optional<MapMetadata> read_sidecar(const std::filesystem::path& pgm_path) {
  const auto meta_path = sidecar_path(pgm_path);
  std::ifstream in(meta_path);
  if (!in) return std::nullopt;
  MapMetadata meta;
  try {
    const auto j = nlohmann::json::parse(in);
    meta.resolution = j.value("resolution", kDefaultResolution);
    if (j.contains("origin")) {
      const auto& o = j.at("origin");
      meta.origin = {o.at(0).get<double>(), o.at(1).get<double>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIoError, meta_path.string() + ": " + e.what());
  }
  if (!(meta.resolution > 0.0)) {
    throw Error(ErrorCode::kIoError, meta_path.string() + ": resolution must be > 0");
  }
  return meta;
}

void write_sidecar(const std::filesystem::path& pgm_path, const MapMetadata& meta) {
  const auto meta_path = sidecar_path(pgm_path);
  std::ofstream out(meta_path, std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write " + meta_path.string());
  }
  nlohmann::json j;
  j["resolution"] = meta.resolution;
  j["origin"] = {meta.origin.x, meta.origin.y};
  out << j.dump(2) << '\n';
}

TrinaryGrid load_map(const std::filesystem::path& path) {
  const Image8 image = read_pgm(path);
  const MapMetadata meta = read_sidecar(path).value_or(MapMetadata{});
  TrinaryGrid grid(image.width, image.height, CellClass::kUncertain,
                   meta.resolution, meta.origin);
  auto cells = grid.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i] = classify_pixel(image.pixels[i]);
  }
  return grid;
}

Image8 to_image(const TrinaryGrid& grid) {
  Image8 image{grid.width(), grid.height(), {}};
  image.pixels.reserve(grid.size());
  for (CellClass c : grid.cells()) image.pixels.push_back(class_pixel(c));
  return image;
}

Image8 to_image(const ProbabilityGrid& grid) {
  Image8 image{grid.width(), grid.height(), {}};
  image.pixels.reserve(grid.size());
  for (double p : grid.cells()) image.pixels.push_back(probability_pixel(p));
  return image;
}

void save_snapshot(const TrinaryGrid& grid, const std::filesystem::path& path) {
  write_pgm(path, to_image(grid));
  write_sidecar(path, {grid.resolution(), grid.origin()});
}

void save_snapshot(const ProbabilityGrid& grid, const std::filesystem::path& path) {
  write_pgm(path, to_image(grid));
  write_sidecar(path, {grid.resolution(), grid.origin()});
}

}  // namespace pex
