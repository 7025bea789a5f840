#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pacrehab/game/event_log.hpp"
#include "pacrehab/game/maze.hpp"
#include "pacrehab/harness/config.hpp"
#include "pacrehab/parallel.hpp"
#include "pacrehab/players/players.hpp"

namespace pacrehab {

enum class Condition { Keyboard, Tracker };

inline const char* to_string(Condition c) { return c == Condition::Keyboard ? "keyboard" : "tracker"; }

/// One game of an experiment plan.
struct GameTask {
  Condition condition = Condition::Keyboard;
  /// "pre" or "post" for keyboard games, empty for tracker games.
  std::string phase;
  /// Zero for keyboard games.
  double spread = 0.0;
  double time_rate = 1.0;
  int cell = 0;
  int game = 0;
  std::uint64_t seed = 0;
  /// Log location relative to the run directory.
  std::string path;
};

/// Compact level label for directory names: 0.1, 0.3333, 1.
inline std::string level_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

inline std::string game_file(int game) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "game_%03d.jsonl", game);
  return buf;
}

/// Enumerates every game of the plan. Cell 0 holds the keyboard games before
/// the tracker block, cell 1 those after it, and cells 2.. the (spread,
/// time_rate) grid in spread-major order. Each game's seed is derived from the
/// master seed, its cell and its index within the cell.
inline std::vector<GameTask> plan_tasks(const ExperimentPlan& plan) {
  std::vector<GameTask> tasks;
  auto keyboard = [&](int cell, const char* phase, int count) {
    for (int g = 0; g < count; ++g) {
      GameTask t;
      t.phase = phase;
      t.cell = cell;
      t.game = g;
      t.seed = derive_seed(plan.seed, static_cast<std::uint64_t>(cell), static_cast<std::uint64_t>(g));
      t.path = std::string("keyboard/") + phase + "/" + game_file(g);
      tasks.push_back(t);
    }
  };
  keyboard(0, "pre", plan.baseline_pre);
  keyboard(1, "post", plan.baseline_post);
  int cell = 2;
  for (double spread : plan.spreads) {
    for (double rate : plan.time_rates) {
      const std::string dir = "tracker/spread_" + level_label(spread) + "_trate_" + level_label(rate) + "/";
      for (int g = 0; g < plan.games_per_cell; ++g) {
        GameTask t;
        t.condition = Condition::Tracker;
        t.spread = spread;
        t.time_rate = rate;
        t.cell = cell;
        t.game = g;
        t.seed = derive_seed(plan.seed, static_cast<std::uint64_t>(cell), static_cast<std::uint64_t>(g));
        t.path = dir + game_file(g);
        tasks.push_back(t);
      }
      ++cell;
    }
  }
  return tasks;
}

inline EventLog play_task(const ExperimentPlan& plan, const Maze& maze, const GameTask& task) {
  RunOptions options;
  options.frame_cap = plan.frame_cap;
  const FrameClock clock(plan.base_frame_ms, task.time_rate);
  if (task.condition == Condition::Keyboard)
    return play_keyboard(maze, clock, plan.profiles.keyboard, plan.policy, task.seed, options);
  GamepadConfig pad = plan.gamepad;
  pad.spread_r = task.spread;
  return play_reach(maze, clock, pad, plan.profiles.reach, plan.policy, task.seed, options);
}

struct GameRecord {
  GameTask task;
  EventLog log;
};

/// Plays every game of the plan in memory, in task order.
inline std::vector<GameRecord> simulate_plan(const ExperimentPlan& plan, const Maze& maze) {
  plan.validate();
  const auto tasks = plan_tasks(plan);
  std::vector<GameRecord> out(tasks.size());
  parallel_for(tasks.size(), plan.threads, [&](std::size_t i) {
    out[i].task = tasks[i];
    out[i].log = play_task(plan, maze, tasks[i]);
  });
  return out;
}

inline constexpr const char* kManifestHeader =
    "condition,phase,spread_m,time_rate,game,seed,path,score,frames,end_reason,hash";

struct ManifestEntry {
  GameTask task;
  int score = 0;
  std::int64_t frames = 0;
  std::string end_reason;
  std::string hash;
};

inline ManifestEntry manifest_entry(const GameRecord& r) {
  ManifestEntry e;
  e.task = r.task;
  e.score = r.log.final_score();
  e.frames = r.log.frames();
  e.end_reason = r.log.end() ? to_string(r.log.end()->reason) : "";
  e.hash = hex64(log_hash(r.log));
  return e;
}

inline std::string manifest_row(const ManifestEntry& e) {
  std::ostringstream row;
  row.precision(17);
  row << to_string(e.task.condition) << ',' << e.task.phase << ',' << e.task.spread << ','
      << e.task.time_rate << ',' << e.task.game << ',' << e.task.seed << ',' << e.task.path << ','
      << e.score << ',' << e.frames << ',' << e.end_reason << ',' << e.hash;
  return row.str();
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::vector<ManifestEntry> read_manifest(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line) || line != kManifestHeader)
    throw Error(ErrorCode::MalformedLog, file.string() + ": unexpected manifest header");
  std::vector<ManifestEntry> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split_csv_line(line);
    if (c.size() != 11) throw Error(ErrorCode::MalformedLog, file.string() + ": bad manifest row");
    ManifestEntry e;
    try {
      e.task.condition = c[0] == "keyboard" ? Condition::Keyboard : Condition::Tracker;
      e.task.phase = c[1];
      e.task.spread = std::stod(c[2]);
      e.task.time_rate = std::stod(c[3]);
      e.task.game = std::stoi(c[4]);
      e.task.seed = std::stoull(c[5]);
      e.task.path = c[6];
      e.score = std::stoi(c[7]);
      e.frames = std::stoll(c[8]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedLog, file.string() + ": bad manifest row");
    }
    e.end_reason = c[9];
    e.hash = c[10];
    out.push_back(std::move(e));
  }
  return out;
}

struct RunResult {
  std::filesystem::path dir;
  std::vector<ManifestEntry> manifest;
};

/// Runs the plan and writes one JSON-lines log per game, the resolved plan
/// and manifest.csv under `dir`:
///   keyboard/pre/, keyboard/post/, tracker/spread_<r>_trate_<t>/
inline RunResult cmd_run(const ExperimentPlan& plan, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const Maze maze = load_canonical_level();
  const auto records = simulate_plan(plan, maze);
  RunResult result;
  result.dir = dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& r : records) {
    const fs::path file = dir / r.task.path;
    fs::create_directories(file.parent_path(), ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + file.parent_path().string());
    std::ofstream out(file);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + file.string());
    write_jsonl(out, r.log);
    if (!out) throw Error(ErrorCode::Io, "write failed: " + file.string());
    result.manifest.push_back(manifest_entry(r));
  }
  ExperimentPlan resolved = plan;
  resolved.out_dir = dir.string();
  write_json_file((dir / "plan.json").string(), to_json(resolved));
  std::ofstream manifest(dir / "manifest.csv");
  if (!manifest) throw Error(ErrorCode::Io, "cannot write manifest");
  manifest << kManifestHeader << '\n';
  for (const auto& e : result.manifest) manifest << manifest_row(e) << '\n';
  return result;
}

inline RunResult cmd_run(const ExperimentPlan& plan) { return cmd_run(plan, plan.out_dir); }

inline EventLog load_log(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + file.string());
  return read_jsonl(in);
}

/// Loads every game listed in a run directory's manifest.
inline std::vector<GameRecord> load_run(const std::filesystem::path& dir) {
  std::vector<GameRecord> out;
  for (const auto& e : read_manifest(dir / "manifest.csv")) out.push_back({e.task, load_log(dir / e.task.path)});
  return out;
}

}  // namespace pacrehab
