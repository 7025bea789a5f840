#pragma once

#include <cstdint>
#include <vector>

#include "pacrehab/error.hpp"
#include "pacrehab/game/event_log.hpp"

namespace pacrehab {

/// Behavioural features of one game, in frames.
struct FeatureSeries {
  std::vector<double> iki;
  std::vector<double> ptt;
  /// Frame at which each sample became available (its closing event).
  std::vector<std::int64_t> iki_frames;
  std::vector<std::int64_t> ptt_frames;
};

/// Inter-key intervals: frame differences between consecutive command events.
inline std::vector<double> extract_iki(const EventLog& log, std::vector<std::int64_t>* frames = nullptr) {
  std::vector<double> out;
  bool first = true;
  std::int64_t prev = 0;
  for (const Event& e : log.events) {
    if (!std::holds_alternative<CommandEvent>(e.payload)) continue;
    if (!first) {
      if (e.frame < prev) throw Error(ErrorCode::MalformedLog, "command frames decrease");
      out.push_back(static_cast<double>(e.frame - prev));
      if (frames) frames->push_back(e.frame);
    }
    first = false;
    prev = e.frame;
  }
  return out;
}

/// Turning times: for each pair of consecutive turn events, the number of
/// motionless frames strictly between them.
inline std::vector<double> extract_ptt(const EventLog& log, std::vector<std::int64_t>* frames = nullptr) {
  std::vector<double> out;
  bool seen_turn = false;
  std::int64_t last_turn = 0;
  std::int64_t stalled = 0;
  for (const Event& e : log.events) {
    if (const auto* m = std::get_if<MotionEvent>(&e.payload)) {
      if (seen_turn && !m->moved && e.frame > last_turn) ++stalled;
    } else if (std::holds_alternative<TurnEvent>(e.payload)) {
      if (seen_turn) {
        out.push_back(static_cast<double>(stalled));
        if (frames) frames->push_back(e.frame);
      }
      seen_turn = true;
      last_turn = e.frame;
      stalled = 0;
    }
  }
  return out;
}

inline FeatureSeries extract_features(const EventLog& log) {
  FeatureSeries f;
  f.iki = extract_iki(log, &f.iki_frames);
  f.ptt = extract_ptt(log, &f.ptt_frames);
  return f;
}

/// Score relative to the mean keyboard score.
inline double nscore(double score, double keyboard_mean) {
  if (keyboard_mean == 0.0) throw Error(ErrorCode::DivisionByZero, "keyboard mean score is zero");
  if (keyboard_mean < 0.0) throw Error(ErrorCode::InvalidArgument, "keyboard mean score must be positive");
  return score / keyboard_mean;
}

}  // namespace pacrehab
