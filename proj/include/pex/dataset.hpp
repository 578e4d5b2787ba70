#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pex/grid.hpp"
#include "pex/map_io.hpp"
#include "pex/scenario.hpp"

namespace pex {

struct CollectOptions {
  int samples = 0;
  std::uint64_t seed = 0;
  int side = 64;       // window side of every pair
  int max_ticks = 40;  // partial explorations run 0..max_ticks ticks
  // Robot and sensor parameters; world, predictor and seed are ignored.
  ScenarioConfig scenario;
};

// One dataset pair as stored on disk: the observation window as three
// stacked planes (free, uncertain, obstacle) and the truth window.
struct DatasetPair {
  ChannelStack obs;
  TrinaryGrid truth;
};

Image8 stack_planes(const ChannelStack& stack);
ChannelStack unstack_planes(const Image8& image);

// Runs randomized partial null-predictor explorations over the *.pgm maps
// in `corpus` and writes NNNNNN.obs.pgm / NNNNNN.gt.pgm pairs plus
// manifest.json into `out`. Deterministic for a fixed seed.
// Throws kConfigError when the corpus has no maps, kIoError on file errors.
void collect_dataset(const std::filesystem::path& corpus, const std::filesystem::path& out,
                     const CollectOptions& options);

// Reads pair `index` listed in `dir`/manifest.json.
DatasetPair read_pair(const std::filesystem::path& dir, int index);

}  // namespace pex
