#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pacrehab/harness/config.hpp"
#include "pacrehab/model/reference.hpp"
#include "pacrehab/parallel.hpp"
#include "pacrehab/players/calibration.hpp"
#include "pacrehab/players/players.hpp"
#include "pacrehab/stats/stats.hpp"

namespace pacrehab {

struct FindConfigOptions {
  Grid grid{{0.10, 0.40}, {1.0 / 3.0, 2.0 / 3.0, 1.0}};
  double tolerance = 0.05;
  int seeds = 30;
  std::uint64_t seed = 1;
  ReachProfile profile = calibrated_reach_profile();
  PolicyConfig policy{};
  GamepadConfig gamepad{};
  double base_frame_ms = 16.67;
  std::int64_t frame_cap = 50'000;
  unsigned threads = 0;
};

struct CellResult {
  double spread = 0.0;
  double time_rate = 1.0;
  int games = 0;
  /// Games with a defined NLL.
  int scored = 0;
  double mean_nll = stats::kNaN;
  double sd_nll = stats::kNaN;
  double distance() const { return std::abs(mean_nll - 1.0); }
};

struct FindConfigResult {
  /// Every grid cell in grid order (spread-major).
  std::vector<CellResult> cells;
  /// Cells within tolerance, closest to unit mean NLL first; ties go to the
  /// larger spread, then the faster rate.
  std::vector<CellResult> ranked;
};

inline FindConfigResult cmd_find_config(const RefModel& model, const FindConfigOptions& opt) {
  if (opt.grid.spreads.empty() || opt.grid.time_rates.empty())
    throw Error(ErrorCode::InvalidArgument, "grid must not be empty");
  if (opt.seeds < 1) throw Error(ErrorCode::InvalidArgument, "seeds must be >= 1");
  if (!(opt.tolerance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be >= 0");
  opt.profile.validate();
  const Maze maze = load_canonical_level();

  FindConfigResult res;
  for (double s : opt.grid.spreads)
    for (double t : opt.grid.time_rates) {
      CellResult c;
      c.spread = s;
      c.time_rate = t;
      c.games = opt.seeds;
      res.cells.push_back(c);
    }
  const std::size_t n = res.cells.size() * static_cast<std::size_t>(opt.seeds);
  std::vector<double> nll(n, stats::kNaN);
  RunOptions run;
  run.frame_cap = opt.frame_cap;
  parallel_for(n, opt.threads, [&](std::size_t i) {
    const std::size_t cell = i / static_cast<std::size_t>(opt.seeds);
    const std::size_t game = i % static_cast<std::size_t>(opt.seeds);
    GamepadConfig pad = opt.gamepad;
    pad.spread_r = res.cells[cell].spread;
    const FrameClock clock(opt.base_frame_ms, res.cells[cell].time_rate);
    const EventLog log = play_reach(maze, clock, pad, opt.profile, opt.policy, derive_seed(opt.seed, cell, game), run);
    const FeatureSeries f = extract_features(log);
    if (f.iki.empty() || f.ptt.empty()) return;
    const double ll = log_likelihood(f, model);
    if (ll != 0.0) nll[i] = model.ll_ref_mean / ll;
  });
  for (std::size_t c = 0; c < res.cells.size(); ++c) {
    std::vector<double> xs;
    for (int g = 0; g < opt.seeds; ++g) {
      const double v = nll[c * static_cast<std::size_t>(opt.seeds) + static_cast<std::size_t>(g)];
      if (std::isfinite(v)) xs.push_back(v);
    }
    res.cells[c].scored = static_cast<int>(xs.size());
    res.cells[c].mean_nll = stats::mean(xs);
    res.cells[c].sd_nll = stats::sd(xs);
  }
  for (const auto& c : res.cells)
    if (std::isfinite(c.mean_nll) && c.distance() <= opt.tolerance) res.ranked.push_back(c);
  std::stable_sort(res.ranked.begin(), res.ranked.end(), [](const CellResult& a, const CellResult& b) {
    if (a.distance() != b.distance()) return a.distance() < b.distance();
    if (a.spread != b.spread) return a.spread > b.spread;
    return a.time_rate > b.time_rate;
  });
  return res;
}

/// Calibrates the keyboard latency and carries it over to the reach profile,
/// so both players share one reaction-time model.
struct CalibrateOutcome {
  ProfileSet profiles;
  CalibrationResult result;
};

inline CalibrateOutcome cmd_calibrate(const ProfileSet& start, const PolicyConfig& policy,
                                      const CalibrationOptions& opt = {}) {
  CalibrateOutcome out;
  out.result = calibrate_keyboard(load_canonical_level(), start.keyboard, policy, opt);
  out.profiles = start;
  out.profiles.keyboard = out.result.profile;
  out.profiles.reach.latency = out.result.profile.latency;
  return out;
}

}  // namespace pacrehab
