#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "pacrehab/model/gamma.hpp"
#include "pacrehab/parallel.hpp"
#include "pacrehab/players/players.hpp"
#include "pacrehab/telemetry/features.hpp"

namespace pacrehab {

/// Pooled frame-domain IKI of a batch of keyboard games.
struct IkiSummary {
  std::size_t samples = 0;
  double mean = 0.0;
  double sd = 0.0;
  GammaFit fit;
  bool fit_ok = false;
};

struct CalibrationOptions {
  /// Target frame-domain IKI distribution at full game speed.
  GammaParams target{2.19, -2.06, 17.11};
  double moment_tolerance = 0.10;
  double shape_tolerance = 0.25;
  int games = 24;
  std::uint64_t seed = 1;
  FrameClock clock{};
  std::vector<double> shapes{2.2, 3.0, 3.5, 4.0};
  /// Candidate offsets as fractions of the starting profile's offset.
  std::vector<double> offset_fractions{1.0, 0.5, 0.0};
  int scale_iterations = 3;
  unsigned threads = 0;
};

struct CalibrationResult {
  KeyboardProfile profile;
  IkiSummary iki;
  /// Root-mean-square of the tolerance-normalised errors over (mean, sd, k).
  double loss = std::numeric_limits<double>::infinity();
  /// Largest of the same errors; <= 1 means every target is met.
  double worst = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool within_tolerance() const { return worst <= 1.0; }
};

inline IkiSummary summarize_keyboard_iki(const Maze& maze, const FrameClock& clock,
                                         const KeyboardProfile& profile, const PolicyConfig& policy,
                                         int games, std::uint64_t seed, unsigned threads = 0) {
  std::vector<std::vector<double>> per_game(static_cast<std::size_t>(games));
  parallel_for(per_game.size(), threads, [&](std::size_t i) {
    per_game[i] = extract_iki(play_keyboard(maze, clock, profile, policy, derive_seed(seed, i)));
  });
  std::vector<double> all;
  for (const auto& g : per_game) all.insert(all.end(), g.begin(), g.end());
  IkiSummary out;
  out.samples = all.size();
  if (all.size() < 2) return out;
  const WeightedSample w(all);
  out.mean = w.mean([](double x) { return x; });
  const double m = out.mean;
  out.sd = std::sqrt(w.sum([m](double x) { return (x - m) * (x - m); }) / static_cast<double>(all.size() - 1));
  try {
    out.fit = fit_gamma_report(all);
    out.fit_ok = !out.fit.location_fallback;
  } catch (const Error&) {
    out.fit_ok = false;
  }
  return out;
}

/// Relative errors of (mean, sd, k) against the target, each divided by its
/// tolerance.
inline std::array<double, 3> calibration_errors(const IkiSummary& s, const CalibrationOptions& opt) {
  if (!s.fit_ok) {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, inf, inf};
  }
  const GammaParams& t = opt.target;
  return {std::abs(s.mean / t.mean() - 1.0) / opt.moment_tolerance,
          std::abs(s.sd / std::sqrt(t.variance()) - 1.0) / opt.moment_tolerance,
          std::abs(s.fit.params.k / t.k - 1.0) / opt.shape_tolerance};
}

/// Tunes the keyboard latency so that simulated full-speed IKI matches the
/// target Gamma. For each candidate (shape, offset) the scale is solved by
/// secant steps on the IKI mean; the candidate with the smallest loss wins.
inline CalibrationResult calibrate_keyboard(const Maze& maze, const KeyboardProfile& start,
                                            const PolicyConfig& policy, const CalibrationOptions& opt = {}) {
  start.latency.validate();
  if (opt.games < 1) throw Error(ErrorCode::InvalidArgument, "calibration needs at least one game");
  const double target_mean = opt.target.mean();
  CalibrationResult best;
  best.profile = start;

  auto evaluate = [&](const LatencyModel& lat) {
    KeyboardProfile p = start;
    p.latency = lat;
    IkiSummary s = summarize_keyboard_iki(maze, opt.clock, p, policy, opt.games, opt.seed, opt.threads);
    ++best.evaluations;
    const auto e = calibration_errors(s, opt);
    const double loss = std::sqrt((e[0] * e[0] + e[1] * e[1] + e[2] * e[2]) / 3.0);
    if (loss < best.loss) {
      best.loss = loss;
      best.worst = std::max({e[0], e[1], e[2]});
      best.profile = p;
      best.iki = s;
    }
    return s.mean;
  };

  for (double frac : opt.offset_fractions) {
    for (double shape : opt.shapes) {
      LatencyModel lat{shape, start.latency.scale_ms, start.latency.offset_ms * frac};
      double s0 = lat.scale_ms;
      double m0 = evaluate(lat);
      // First guess: scale the reaction-time share of the mean proportionally.
      double s1 = std::clamp(s0 * target_mean / std::max(m0, 1.0), 1.0, 2000.0);
      for (int it = 0; it < opt.scale_iterations; ++it) {
        if (s1 == s0) break;
        lat.scale_ms = s1;
        const double m1 = evaluate(lat);
        const double slope = (m1 - m0) / (s1 - s0);
        s0 = s1;
        m0 = m1;
        if (!(slope > 0.0)) break;
        s1 = std::clamp(s1 + (target_mean - m1) / slope, 1.0, 2000.0);
      }
    }
  }
  return best;
}

/// Keyboard profile produced by calibrate_keyboard from the default profile
/// and default options on the canonical level.
inline KeyboardProfile calibrated_keyboard_profile() {
  KeyboardProfile p;
  p.latency = {4.0, 65.129656910405529, 40.0};
  return p;
}

/// Reach profile sharing the calibrated keyboard latency. The hand speed comes
/// from a sweep over 0.2 to 0.5 m/s: from 0.2 to 0.3 m/s the smallest-spread,
/// slowest-rate cell of the standard grid is the one closest to keyboard play
/// by a wide margin, and 0.25 m/s puts its mean NLL nearest to 1. At 0.5 m/s
/// the wide spread at the slowest rate overtakes it.
inline ReachProfile calibrated_reach_profile() {
  ReachProfile p;
  p.latency = calibrated_keyboard_profile().latency;
  p.hand_speed_mps = 0.25;
  return p;
}

}  // namespace pacrehab
