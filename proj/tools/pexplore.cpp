#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "pex/dataset.hpp"
#include "pex/explorer.hpp"
#include "pex/map_io.hpp"
#include "pex/metrics.hpp"
#include "pex/scenario.hpp"
#include "pex/worldgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw pex::Error(pex::ErrorCode::kIoError, "cannot create " + dir.string());
}

json summary_json(const pex::Scenario& s, const pex::ExplorationResult& r) {
  const auto t90 = pex::ticks_to_coverage(r.ticks, 0.9);
  return {
      {"predictor", s.config.predictor.type},
      {"robots", s.robots.size()},
      {"complete", r.complete},
      {"steps", r.steps},
      {"ticks_to_90", t90 ? json(*t90) : json(nullptr)},
      {"coverage", r.ticks.empty() ? 0.0 : r.ticks.back().coverage},
      {"accuracy", r.ticks.empty() ? 0.0 : r.ticks.back().accuracy},
      {"map_error", r.map_error},
      {"objective", r.objective},
  };
}

int cmd_run(const fs::path& config, const fs::path& out, int snapshot_every) {
  const pex::Scenario scenario = pex::build_scenario(pex::load_scenario(config));
  ensure_dir(out);
  pex::RunOptions options;
  if (snapshot_every > 0) {
    options.snapshot_dir = out / "snapshots";
    options.snapshot_every = snapshot_every;
    ensure_dir(options.snapshot_dir);
  }
  const pex::ExplorationResult result = pex::run_exploration(scenario, options);

  std::ofstream csv(out / "metrics.csv", std::ios::binary);
  pex::write_metrics_csv(csv, result.ticks);
  if (!csv) throw pex::Error(pex::ErrorCode::kIoError, "failed writing metrics.csv");
  pex::save_snapshot(result.fused, out / "final_fused.pgm");
  pex::save_snapshot(result.predicted, out / "final_predicted.pgm");
  pex::save_snapshot(result.observed, out / "final_observed.pgm");
  pex::save_snapshot(scenario.world, out / "world.pgm");
  std::ofstream(out / "summary.json") << summary_json(scenario, result).dump(2) << '\n';
  fmt::print("complete={} steps={} coverage={:.4f}\n", result.complete, result.steps,
             result.ticks.back().coverage);
  return result.complete ? 0 : 3;
}

int cmd_genmap(const fs::path& out, int count, int width, int height, int rooms,
               std::uint64_t seed, double resolution) {
  ensure_dir(out);
  for (int k = 0; k < count; ++k) {
    const auto world = pex::generate_world(width, height, rooms, seed + static_cast<std::uint64_t>(k),
                                           resolution);
    pex::save_snapshot(world, out / fmt::format("world_{:03d}.pgm", k));
  }
  return 0;
}

int cmd_eval(const fs::path& pred_dir, const fs::path& truth_dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(pred_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".pgm") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  double psnr_sum = 0.0;
  double ssim_sum = 0.0;
  int n = 0;
  fmt::print("{:<32} {:>10} {:>10}\n", "file", "psnr_db", "ssim");
  for (const auto& f : files) {
    const fs::path truth = truth_dir / f.filename();
    if (!fs::exists(truth)) continue;
    const auto a = pex::read_pgm(f);
    const auto b = pex::read_pgm(truth);
    const double p = pex::psnr(a, b);
    const double s = pex::ssim(a, b);
    fmt::print("{:<32} {:>10.4f} {:>10.6f}\n", f.filename().string(), p, s);
    psnr_sum += p;
    ssim_sum += s;
    ++n;
  }
  if (n == 0) {
    std::cerr << "no matching prediction/truth pairs\n";
    return 2;
  }
  fmt::print("{:<32} {:>10.4f} {:>10.6f}\n", fmt::format("mean ({} pairs)", n), psnr_sum / n,
             ssim_sum / n);
  return 0;
}

int cmd_bench(const std::vector<fs::path>& configs, const std::vector<std::string>& predictors) {
  fmt::print("{:<28} {:<8} {:>8} {:>6} {:>8} {:>9} {:>9} {:>10}\n", "scenario", "predictor",
             "complete", "T", "t90", "coverage", "accuracy", "objective");
  for (const auto& path : configs) {
    const pex::ScenarioConfig base = pex::load_scenario(path);
    for (const auto& type : predictors) {
      pex::ScenarioConfig cfg = base;
      cfg.predictor.type = type;
      const pex::Scenario scenario = pex::build_scenario(cfg);
      const auto r = pex::run_exploration(scenario);
      const auto t90 = pex::ticks_to_coverage(r.ticks, 0.9);
      fmt::print("{:<28} {:<8} {:>8} {:>6} {:>8} {:>9.4f} {:>9.4f} {:>10.4f}\n",
                 path.filename().string(), type, r.complete, r.steps,
                 t90 ? std::to_string(*t90) : std::string("-"), r.ticks.back().coverage,
                 r.ticks.back().accuracy, r.objective);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frontier exploration with map prediction"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one exploration scenario");
  fs::path run_config, run_out;
  int snapshot_every = 0;
  run->add_option("--config", run_config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "Output directory")->required();
  run->add_option("--snapshot-every", snapshot_every, "Save the fused map every N ticks");

  auto* collect = app.add_subcommand("collect", "Collect observation/truth window pairs");
  fs::path corpus, collect_out, collect_config;
  pex::CollectOptions copts;
  collect->add_option("--corpus", corpus, "Directory of .pgm maps")->required();
  collect->add_option("--out", collect_out, "Dataset directory")->required();
  collect->add_option("--samples", copts.samples, "Number of pairs")->required();
  collect->add_option("--seed", copts.seed, "RNG seed")->required();
  collect->add_option("--side", copts.side, "Window side")->capture_default_str();
  collect->add_option("--max-ticks", copts.max_ticks, "Longest partial exploration")
      ->capture_default_str();
  collect->add_option("--config", collect_config, "Scenario JSON for robot parameters")
      ->check(CLI::ExistingFile);

  auto* genmap = app.add_subcommand("genmap", "Generate room-and-corridor worlds");
  fs::path gen_out;
  int gen_count = 1, gen_w = 64, gen_h = 64, gen_rooms = 5;
  std::uint64_t gen_seed = 0;
  double gen_res = pex::kDefaultResolution;
  genmap->add_option("--out", gen_out, "Output directory")->required();
  genmap->add_option("--count", gen_count)->capture_default_str();
  genmap->add_option("--width", gen_w)->capture_default_str();
  genmap->add_option("--height", gen_h)->capture_default_str();
  genmap->add_option("--rooms", gen_rooms)->capture_default_str();
  genmap->add_option("--seed", gen_seed)->required();
  genmap->add_option("--resolution", gen_res)->capture_default_str();

  auto* eval = app.add_subcommand("eval", "PSNR/SSIM of predictions against truth images");
  fs::path pred_dir, truth_dir;
  eval->add_option("--pred", pred_dir)->required()->check(CLI::ExistingDirectory);
  eval->add_option("--truth", truth_dir)->required()->check(CLI::ExistingDirectory);

  auto* bench = app.add_subcommand("bench", "Compare predictors over scenarios");
  std::vector<fs::path> bench_configs;
  std::vector<std::string> bench_predictors{"null", "oracle"};
  bench->add_option("--config", bench_configs, "Scenario JSON files")->required();
  bench->add_option("--predictors", bench_predictors)->delimiter(',')->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_config, run_out, snapshot_every);
    if (*collect) {
      if (!collect_config.empty()) copts.scenario = pex::load_scenario(collect_config);
      pex::collect_dataset(corpus, collect_out, copts);
      return 0;
    }
    if (*genmap) return cmd_genmap(gen_out, gen_count, gen_w, gen_h, gen_rooms, gen_seed, gen_res);
    if (*eval) return cmd_eval(pred_dir, truth_dir);
    if (*bench) return cmd_bench(bench_configs, bench_predictors);
  } catch (const pex::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
