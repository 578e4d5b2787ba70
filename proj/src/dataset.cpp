#include "pex/dataset.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "json.hpp"
#include "pex/explorer.hpp"
#include "pex/rng.hpp"

namespace pex {

namespace {

using nlohmann::json;

std::vector<std::filesystem::path> corpus_maps(const std::filesystem::path& corpus) {
  std::vector<std::filesystem::path> maps;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(corpus, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      maps.push_back(entry.path());
    }
  }
  if (ec) throw Error(ErrorCode::kIoError, "cannot list corpus " + corpus.string());
  std::sort(maps.begin(), maps.end());
  return maps;
}

json cell_json(Cell c) { return json::array({c.col, c.row}); }

}  // namespace

Image8 stack_planes(const ChannelStack& s) {
  Image8 img{s.width, 3 * s.height, {}};
  img.pixels.reserve(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height));
  for (const auto* plane : {&s.free, &s.uncertain, &s.obstacle}) {
    img.pixels.insert(img.pixels.end(), plane->begin(), plane->end());
  }
  return img;
}

ChannelStack unstack_planes(const Image8& img) {
  if (img.height % 3 != 0) {
    throw Error(ErrorCode::kMalformedPgm, "stacked observation height is not a multiple of 3");
  }
  ChannelStack s;
  s.width = img.width;
  s.height = img.height / 3;
  const auto plane = static_cast<std::ptrdiff_t>(s.width) * s.height;
  const auto begin = img.pixels.begin();
  s.free.assign(begin, begin + plane);
  s.uncertain.assign(begin + plane, begin + 2 * plane);
  s.obstacle.assign(begin + 2 * plane, begin + 3 * plane);
  return s;
}

void collect_dataset(const std::filesystem::path& corpus, const std::filesystem::path& out,
                     const CollectOptions& options) {
  if (options.samples < 0) throw Error(ErrorCode::kConfigError, "samples must be >= 0");
  if (options.side < 8) throw Error(ErrorCode::kConfigError, "side must be >= 8");
  if (options.max_ticks < 0) throw Error(ErrorCode::kConfigError, "max_ticks must be >= 0");
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + out.string());

  json manifest;
  manifest["side"] = options.side;
  manifest["count"] = options.samples;
  manifest["samples"] = json::array();

  if (options.samples > 0) {
    const auto maps = corpus_maps(corpus);
    if (maps.empty()) {
      throw Error(ErrorCode::kConfigError, "no .pgm maps in corpus " + corpus.string());
    }
    std::vector<TrinaryGrid> worlds;
    for (const auto& m : maps) worlds.push_back(load_map(m));

    Rng rng(options.seed);
    for (int s = 0; s < options.samples; ++s) {
      const auto m = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(maps.size()) - 1));
      ScenarioConfig cfg = options.scenario;
      cfg.world = maps[m];
      cfg.generate.reset();
      cfg.starts.clear();
      cfg.robot_count = 1;
      cfg.predictor = PredictorConfig{};
      cfg.window_side = options.side;
      cfg.seed = rng.next();
      cfg.max_steps = static_cast<int>(rng.uniform_int(1, options.max_ticks + 1));
      const Scenario scenario = build_scenario(cfg, worlds[m]);
      const ExplorationResult run = run_exploration(scenario);

      // Window around the last sensed pose; for one robot the merged map is
      // its own observation map.
      RobotState robot = run.robots.front();
      robot.pose = run.ticks.back().robots.front().pose;
      const ObservationWindow obs = extract_window(run.observed, robot, options.side);
      const ObservationWindow gt = extract_window(worlds[m], robot, options.side);

      const std::string stem = fmt::format("{:06d}", s);
      write_pgm(out / (stem + ".obs.pgm"), stack_planes(encode_channels(obs.grid)));
      write_pgm(out / (stem + ".gt.pgm"), to_image(gt.grid));
      manifest["samples"].push_back({
          {"obs", stem + ".obs.pgm"},
          {"gt", stem + ".gt.pgm"},
          {"map", maps[m].filename().string()},
          {"robot_cell", cell_json(obs.center)},
          {"world_offset", cell_json(obs.world_offset)},
          {"crop_side", obs.crop_side},
          {"resolution", obs.grid.resolution()},
      });
    }
  }

  std::ofstream f(out / "manifest.json", std::ios::binary);
  if (!f) throw Error(ErrorCode::kIoError, "cannot write manifest in " + out.string());
  f << manifest.dump(2) << '\n';
  if (!f) throw Error(ErrorCode::kIoError, "failed writing manifest in " + out.string());
}

DatasetPair read_pair(const std::filesystem::path& dir, int index) {
  std::ifstream f(dir / "manifest.json");
  if (!f) throw Error(ErrorCode::kIoError, "cannot open manifest in " + dir.string());
  json manifest;
  try {
    manifest = json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("bad manifest: ") + e.what());
  }
  const auto& samples = manifest.at("samples");
  if (index < 0 || index >= static_cast<int>(samples.size())) {
    throw Error(ErrorCode::kInvalidArgument, "pair index out of range");
  }
  const auto& entry = samples[static_cast<std::size_t>(index)];
  DatasetPair pair;
  pair.obs = unstack_planes(read_pgm(dir / entry.at("obs").get<std::string>()));
  const Image8 gt = read_pgm(dir / entry.at("gt").get<std::string>());
  const double res = entry.at("resolution").get<double>();
  pair.truth = TrinaryGrid(gt.width, gt.height, CellClass::kUncertain, res);
  for (std::size_t i = 0; i < gt.pixels.size(); ++i) {
    pair.truth.cells()[i] = classify_pixel(gt.pixels[i]);
  }
  return pair;
}

}  // namespace pex
