// lvs: synthetic scene generation, tube scheduling, rendering, and the
// evaluation sweeps, glued together behind one binary.
//
// Subcommands:
//   gen      write a synthetic scene (scene.json, ground_truth.json, backgrounds)
//   run      schedule an episode (decision_log.jsonl, schedule.json [, frames])
//   metrics  inclusion/collision/switch CSV for a finished run, or an r sweep
//   oracle   per-interval greedy-vs-exhaustive energy comparison CSV
//   render   re-render frames from a saved schedule
//
// Exit codes: 0 success, 1 usage, 2 data/validation, 3 runtime.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lvs/compositor.hpp"
#include "lvs/dataset_io.hpp"
#include "lvs/errors.hpp"
#include "lvs/metrics.hpp"
#include "lvs/scenario.hpp"
#include "lvs/scheduler.hpp"
#include "lvs/version.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct GlobalFlags {
  bool quiet = false;
};

void info(const GlobalFlags& g, const std::string& msg) {
  if (!g.quiet) std::cout << msg << "\n";
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lvs::IoError("cannot open for read: " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw lvs::IoError("cannot open for write: " + path.string());
  out << text;
  if (!out) throw lvs::IoError("write failed: " + path.string());
}

// ---- engine flags shared by run/metrics/oracle ----

struct EngineFlags {
  double alpha = 1.0;
  double beta = 0.5;
  double r = 15.0;
  double d = 0.978;
  double delta_t_seconds = 1.0;
  double epsilon_gain = 1e-9;
  std::string gain_mode = "approx";
  bool readmit_cut = false;
};

void add_engine_flags(CLI::App* cmd, EngineFlags& flags) {
  cmd->add_option("--alpha", flags.alpha, "Collision weight (exhaustive objective only)")
      ->capture_default_str();
  cmd->add_option("--beta", flags.beta, "Retention strength")->capture_default_str();
  cmd->add_option("--r", flags.r,
                  "Collision admission threshold, discounted pixels; inf admits all")
      ->capture_default_str();
  cmd->add_option("--d", flags.d, "Per-frame collision discount in (0,1]")
      ->capture_default_str();
  cmd->add_option("--delta-t", flags.delta_t_seconds, "Decision interval in seconds")
      ->capture_default_str();
  cmd->add_option("--epsilon-gain", flags.epsilon_gain, "Greedy gain denominator guard")
      ->capture_default_str();
  cmd->add_option("--gain-mode", flags.gain_mode, "Greedy gain formula: approx|exact")
      ->check(CLI::IsMember({"approx", "exact"}))
      ->capture_default_str();
  cmd->add_flag("--readmit-cut", flags.readmit_cut,
                "Let cut tubes re-enter the pool with their remaining frames");
}

lvs::EngineConfig resolve_engine(const EngineFlags& flags, int fps) {
  lvs::EngineConfig cfg;
  cfg.alpha = flags.alpha;
  cfg.beta = flags.beta;
  cfg.collision_threshold = flags.r;
  cfg.discount = flags.d;
  cfg.decision_interval =
      std::max<lvs::FrameIndex>(1, std::llround(flags.delta_t_seconds * fps));
  cfg.epsilon_gain = flags.epsilon_gain;
  cfg.gain_mode = flags.gain_mode == "exact" ? lvs::GainMode::ExactMarginal
                                             : lvs::GainMode::ApproxRatio;
  cfg.readmit_cut_tubes = flags.readmit_cut;
  cfg.validate();
  return cfg;
}

ordered_json engine_to_json(const lvs::EngineConfig& cfg) {
  ordered_json j;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  // JSON has no infinity; the admit-all sentinel round-trips as a string.
  if (std::isinf(cfg.collision_threshold)) {
    j["r"] = "inf";
  } else {
    j["r"] = cfg.collision_threshold;
  }
  j["d"] = cfg.discount;
  j["delta_t_frames"] = cfg.decision_interval;
  j["epsilon_gain"] = cfg.epsilon_gain;
  j["gain_mode"] = cfg.gain_mode == lvs::GainMode::ExactMarginal ? "exact" : "approx";
  j["readmit_cut_tubes"] = cfg.readmit_cut_tubes;
  return j;
}

ordered_json manifest_header(const std::string& command) {
  ordered_json j;
  j["tool"] = lvs::kToolName;
  j["version"] = lvs::kToolVersion;
  j["command"] = command;
  return j;
}

// r values like "r=0,5,15,50" or "0,5,15,50"; "inf" is the admit-all sentinel.
std::vector<double> parse_r_list(std::string text) {
  if (text.rfind("r=", 0) == 0) text = text.substr(2);
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "inf" || item == "INF") {
      values.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    try {
      std::size_t pos = 0;
      const double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      values.push_back(v);
    } catch (const std::exception&) {
      throw lvs::ConfigError("bad r value in sweep list: '" + item + "'");
    }
  }
  if (values.empty()) throw lvs::ConfigError("sweep list is empty");
  return values;
}

// ---- gen ----

struct GenArgs {
  std::string out;
  lvs::ScenarioConfig scenario;
  GlobalFlags global;
};

void cmd_gen(const GenArgs& args) {
  args.scenario.validate();

  ordered_json manifest = manifest_header("gen");
  manifest["seed"] = args.scenario.seed;
  manifest["out"] = args.out;
  ordered_json js;
  js["num_slaves"] = args.scenario.num_slaves;
  js["canvas_width"] = args.scenario.canvas_width;
  js["canvas_height"] = args.scenario.canvas_height;
  js["fps"] = args.scenario.fps;
  js["num_persons"] = args.scenario.num_persons;
  js["walks_per_person"] = args.scenario.walks_per_person;
  js["speed_min"] = args.scenario.speed_min;
  js["speed_max"] = args.scenario.speed_max;
  js["rect_min"] = args.scenario.rect_min;
  js["rect_max"] = args.scenario.rect_max;
  js["walk_frames_min"] = args.scenario.walk_frames_min;
  js["walk_frames_max"] = args.scenario.walk_frames_max;
  js["episode_frames"] = args.scenario.episode_frames;
  js["top1_recall"] = args.scenario.top1_recall;
  js["confusion_temperature"] = args.scenario.confusion_temperature;
  manifest["scenario"] = std::move(js);
  write_text_file(fs::path(args.out) / "run_manifest.json", manifest.dump(2) + "\n");

  const lvs::GeneratedScene scene = lvs::generate(args.scenario);
  lvs::save_dataset(scene.dataset, args.out);
  lvs::save_ground_truth(scene.ground_truth, fs::path(args.out) / "ground_truth.json");

  info(args.global, "wrote scene with " + std::to_string(scene.dataset.tubes.size()) +
                        " tubes to " + args.out);
}

// ---- run ----

struct RunArgs {
  std::string scene;
  std::string out;
  EngineFlags engine;
  bool baseline = false;
  bool render = false;
  std::string layout = "per-slave";
  GlobalFlags global;
};

void cmd_run(const RunArgs& args) {
  const lvs::Dataset dataset = lvs::load_dataset(args.scene);
  const lvs::EngineConfig cfg = resolve_engine(args.engine, dataset.master_camera().fps);

  ordered_json manifest = manifest_header("run");
  manifest["scene"] = args.scene;
  manifest["out"] = args.out;
  manifest["engine"] = engine_to_json(cfg);
  manifest["baseline"] = args.baseline;
  manifest["render"] = args.render;
  manifest["layout"] = args.layout;
  write_text_file(fs::path(args.out) / "run_manifest.json", manifest.dump(2) + "\n");

  const lvs::RunResult result = args.baseline
                                    ? lvs::baseline_frame_select(dataset, cfg)
                                    : lvs::run_episode(dataset, cfg);
  write_text_file(fs::path(args.out) / "decision_log.jsonl",
                  lvs::decision_log_to_jsonl(result.log));
  write_text_file(fs::path(args.out) / "schedule.json",
                  lvs::schedule_to_json(result.schedule));

  if (args.render) {
    const lvs::Layout layout = args.layout == "side-by-side"
                                   ? lvs::Layout::SideBySide
                                   : lvs::Layout::PerSlave;
    lvs::render_episode(dataset, result.schedule, layout, args.out);
  }
  info(args.global, "scheduled " + std::to_string(result.log.intervals.size()) +
                        " intervals to " + args.out);
}

// ---- metrics ----

struct MetricsArgs {
  std::string scene;
  std::string run_dir;
  std::string out;
  std::string sweep;  // empty = evaluate a saved run
  bool full_playback = false;
  EngineFlags engine;
  GlobalFlags global;
};

void cmd_metrics(const MetricsArgs& args) {
  const lvs::Dataset dataset = lvs::load_dataset(args.scene);
  const lvs::GroundTruth gt =
      lvs::load_ground_truth(fs::path(args.scene) / "ground_truth.json");

  const lvs::EngineConfig cfg = resolve_engine(args.engine, dataset.master_camera().fps);

  ordered_json manifest = manifest_header("metrics");
  manifest["scene"] = args.scene;
  manifest["run"] = args.run_dir;
  manifest["out"] = args.out;
  manifest["sweep"] = args.sweep;
  manifest["full_playback"] = args.full_playback;
  manifest["engine"] = engine_to_json(cfg);
  write_text_file(fs::path(args.out).string() + ".manifest.json",
                  manifest.dump(2) + "\n");

  if (!args.sweep.empty()) {
    const std::vector<double> r_values = parse_r_list(args.sweep);
    const auto points = lvs::sweep_tradeoff(dataset, gt, cfg, r_values);
    write_text_file(args.out, lvs::tradeoff_csv(points));
    info(args.global, "wrote sweep of " + std::to_string(r_values.size()) +
                          " r values to " + args.out);
    return;
  }

  if (args.run_dir.empty()) {
    throw lvs::ConfigError("metrics requires --run (or --sweep)");
  }
  const fs::path run_dir(args.run_dir);
  const lvs::Schedule schedule =
      lvs::schedule_from_json(read_text_file(run_dir / "schedule.json"));
  const lvs::DecisionLog log =
      lvs::decision_log_from_jsonl(read_text_file(run_dir / "decision_log.jsonl"));

  // The r column echoes the run's threshold, recovered from its manifest.
  double r_used = args.engine.r;
  const fs::path manifest_path = run_dir / "run_manifest.json";
  if (fs::exists(manifest_path)) {
    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(read_text_file(manifest_path));
    } catch (const nlohmann::json::exception& e) {
      throw lvs::ParseError("run manifest: invalid JSON in " + manifest_path.string() +
                            ": " + e.what());
    }
    if (manifest.contains("engine") && manifest["engine"].contains("r")) {
      const auto& jr = manifest["engine"]["r"];
      if (jr.is_number()) {
        r_used = jr.get<double>();
      } else if (jr.is_string() && jr.get<std::string>() == "inf") {
        r_used = std::numeric_limits<double>::infinity();
      }
    }
  }

  lvs::MetricsOptions opts;
  opts.full_playback = args.full_playback;
  const lvs::EpisodeMetrics metrics =
      lvs::compute_metrics(dataset, gt, schedule, log, opts);
  write_text_file(args.out, lvs::metrics_csv(metrics, r_used));
  info(args.global, "wrote metrics to " + args.out);
}

// ---- oracle ----

struct OracleArgs {
  std::string scene;
  std::string out;
  EngineFlags engine;
  GlobalFlags global;
};

void cmd_oracle(const OracleArgs& args) {
  const lvs::Dataset dataset = lvs::load_dataset(args.scene);
  const lvs::EngineConfig cfg = resolve_engine(args.engine, dataset.master_camera().fps);

  ordered_json manifest = manifest_header("oracle");
  manifest["scene"] = args.scene;
  manifest["out"] = args.out;
  manifest["engine"] = engine_to_json(cfg);
  write_text_file(fs::path(args.out).string() + ".manifest.json",
                  manifest.dump(2) + "\n");

  const lvs::OracleReport report = lvs::run_episode_with_oracle(dataset, cfg);

  std::string csv = "interval,slave_id,greedy_energy,oracle_energy,gap,rel_gap\n";
  char buf[200];
  for (const lvs::OracleRow& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.9f,%.9f,%.9f,%.9f\n", row.interval,
                  row.camera, row.greedy_energy, row.oracle_energy, row.gap,
                  row.rel_gap);
    csv += buf;
  }
  // Aggregate row: interval -1 carries the mean relative gap.
  std::snprintf(buf, sizeof(buf), "-1,-1,0,0,0,%.9f\n", report.mean_rel_gap);
  csv += buf;
  write_text_file(args.out, csv);
  info(args.global, "wrote " + std::to_string(report.rows.size()) +
                        " oracle rows to " + args.out + " (mean rel gap " +
                        std::to_string(report.mean_rel_gap) + ")");
}

// ---- render ----

struct RenderArgs {
  std::string scene;
  std::string run_dir;
  std::string out;
  std::string layout = "per-slave";
  GlobalFlags global;
};

void cmd_render(const RenderArgs& args) {
  const lvs::Dataset dataset = lvs::load_dataset(args.scene);
  const lvs::Schedule schedule = lvs::schedule_from_json(
      read_text_file(fs::path(args.run_dir) / "schedule.json"));

  ordered_json manifest = manifest_header("render");
  manifest["scene"] = args.scene;
  manifest["run"] = args.run_dir;
  manifest["out"] = args.out;
  manifest["layout"] = args.layout;
  write_text_file(fs::path(args.out) / "run_manifest.json", manifest.dump(2) + "\n");

  const lvs::Layout layout = args.layout == "side-by-side" ? lvs::Layout::SideBySide
                                                           : lvs::Layout::PerSlave;
  lvs::render_episode(dataset, schedule, layout, args.out);
  info(args.global, "rendered " + std::to_string(schedule.episode_frames) +
                        " frames per camera to " + args.out);
}

int dispatch(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const lvs::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const lvs::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lvs::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lvs::MissingGroundTruthError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lvs::PoolTooLargeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lvs: live video synopsis scheduling over slave-camera activity tubes"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a synthetic scene");
  gen_cmd->add_option("--out", gen.out, "Output scene directory")->required();
  gen_cmd->add_option("--seed", gen.scenario.seed, "RNG seed")->capture_default_str();
  gen_cmd->add_option("--slaves", gen.scenario.num_slaves, "Number of slave cameras")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_cmd->add_option("--persons", gen.scenario.num_persons, "Number of persons")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_cmd->add_option("--walks", gen.scenario.walks_per_person,
                      "Walks per person per slave")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_cmd->add_option("--width", gen.scenario.canvas_width, "Canvas width")
      ->capture_default_str();
  gen_cmd->add_option("--height", gen.scenario.canvas_height, "Canvas height")
      ->capture_default_str();
  gen_cmd->add_option("--fps", gen.scenario.fps, "Frames per second")
      ->capture_default_str();
  gen_cmd->add_option("--episode-frames", gen.scenario.episode_frames,
                      "Episode length in frames")
      ->capture_default_str();
  gen_cmd->add_option("--speed-min", gen.scenario.speed_min, "Min walk speed, px/frame")
      ->capture_default_str();
  gen_cmd->add_option("--speed-max", gen.scenario.speed_max, "Max walk speed, px/frame")
      ->capture_default_str();
  gen_cmd->add_option("--rect-min", gen.scenario.rect_min, "Min rectangle side, px")
      ->capture_default_str();
  gen_cmd->add_option("--rect-max", gen.scenario.rect_max, "Max rectangle side, px")
      ->capture_default_str();
  gen_cmd->add_option("--walk-frames-min", gen.scenario.walk_frames_min,
                      "Min walk length, frames")
      ->capture_default_str();
  gen_cmd->add_option("--walk-frames-max", gen.scenario.walk_frames_max,
                      "Max walk length, frames")
      ->capture_default_str();
  gen_cmd->add_option("--top1-recall", gen.scenario.top1_recall,
                      "Target empirical top-1 re-id accuracy")
      ->capture_default_str();
  gen_cmd->add_option("--temperature", gen.scenario.confusion_temperature,
                      "Softmax confusion temperature; 0 = one-hot")
      ->capture_default_str();
  gen_cmd->add_flag("--quiet", gen.global.quiet, "Suppress progress output");

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Schedule an episode over a scene");
  run_cmd->add_option("--scene", run.scene, "Scene directory")->required();
  run_cmd->add_option("--out", run.out, "Output run directory")->required();
  add_engine_flags(run_cmd, run.engine);
  run_cmd->add_flag("--baseline", run.baseline, "Frame-based baseline instead of greedy");
  run_cmd->add_flag("--render", run.render, "Render frames after scheduling");
  run_cmd->add_option("--layout", run.layout, "Render layout: per-slave|side-by-side")
      ->check(CLI::IsMember({"per-slave", "side-by-side"}))
      ->capture_default_str();
  run_cmd->add_flag("--quiet", run.global.quiet, "Suppress progress output");

  MetricsArgs metrics;
  CLI::App* metrics_cmd = app.add_subcommand("metrics", "Evaluate a run or sweep r");
  metrics_cmd->add_option("--scene", metrics.scene, "Scene directory")->required();
  metrics_cmd->add_option("--run", metrics.run_dir, "Run directory to evaluate");
  metrics_cmd->add_option("--out", metrics.out, "Output CSV path")->required();
  metrics_cmd->add_option(
      "--sweep", metrics.sweep,
      "Comma-separated r values (e.g. r=0,5,15,50); runs one episode per value");
  metrics_cmd->add_flag("--full-playback", metrics.full_playback,
                        "Count a tube as displayed only when fully played");
  add_engine_flags(metrics_cmd, metrics.engine);
  metrics_cmd->add_flag("--quiet", metrics.global.quiet, "Suppress progress output");

  OracleArgs oracle;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Compare greedy against the exhaustive optimum");
  oracle_cmd->add_option("--scene", oracle.scene, "Scene directory")->required();
  oracle_cmd->add_option("--out", oracle.out, "Output CSV path")->required();
  add_engine_flags(oracle_cmd, oracle.engine);
  oracle_cmd->add_flag("--quiet", oracle.global.quiet, "Suppress progress output");

  RenderArgs render;
  CLI::App* render_cmd = app.add_subcommand("render", "Render frames from a saved run");
  render_cmd->add_option("--scene", render.scene, "Scene directory")->required();
  render_cmd->add_option("--run", render.run_dir, "Run directory with schedule.json")
      ->required();
  render_cmd->add_option("--out", render.out, "Output frame directory")->required();
  render_cmd->add_option("--layout", render.layout, "per-slave|side-by-side")
      ->check(CLI::IsMember({"per-slave", "side-by-side"}))
      ->capture_default_str();
  render_cmd->add_flag("--quiet", render.global.quiet, "Suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (gen_cmd->parsed()) return dispatch([&] { cmd_gen(gen); });
  if (run_cmd->parsed()) return dispatch([&] { cmd_run(run); });
  if (metrics_cmd->parsed()) return dispatch([&] { cmd_metrics(metrics); });
  if (oracle_cmd->parsed()) return dispatch([&] { cmd_oracle(oracle); });
  if (render_cmd->parsed()) return dispatch([&] { cmd_render(render); });
  return 1;
}
