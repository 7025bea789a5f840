#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "pacrehab/gamepad/gamepad.hpp"
#include "pacrehab/game/run.hpp"
#include "pacrehab/players/policy.hpp"
#include "pacrehab/rng.hpp"

namespace pacrehab {

/// Reaction latency in milliseconds: offset + Gamma(shape, scale).
/// shape == 0 or scale == 0 makes it a constant offset.
struct LatencyModel {
  double shape = 2.2;
  double scale_ms = 130.0;
  double offset_ms = 80.0;

  void validate() const {
    if (shape < 0.0 || scale_ms < 0.0 || offset_ms < 0.0 || !std::isfinite(shape + scale_ms + offset_ms))
      throw Error(ErrorCode::InvalidArgument, "latency parameters must be finite and >= 0");
  }

  double sample(Rng& rng) const {
    if (shape <= 0.0 || scale_ms <= 0.0) return offset_ms;
    return offset_ms + rng.gamma(shape, scale_ms);
  }

  double mean() const { return offset_ms + shape * scale_ms; }
};

struct KeyboardProfile {
  LatencyModel latency{};
};

struct ReachProfile {
  LatencyModel latency{};
  double hand_speed_mps = 0.5;
  /// Coefficient of variation of the per-reach speed.
  double speed_cv = 0.1;
  /// Standard deviation of Gaussian positional jitter on tracker samples.
  double jitter_sd_m = 0.0;
  double sample_rate_hz = 120.0;

  void validate() const {
    latency.validate();
    if (!(hand_speed_mps > 0.0)) throw Error(ErrorCode::InvalidArgument, "hand speed must be positive");
    if (speed_cv < 0.0 || jitter_sd_m < 0.0)
      throw Error(ErrorCode::InvalidArgument, "noise parameters must be >= 0");
    if (!(sample_rate_hz > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
  }
};

namespace detail {

// Separate streams keep latency draws aligned between the two players for
// the same seed, whatever else each player samples.
enum Stream : std::uint64_t { kGameStream = 0, kLatencyStream = 1, kSpeedStream = 2, kJitterStream = 3 };

inline std::uint64_t game_seed(std::uint64_t seed, const PolicyConfig& p) {
  return derive_seed(seed ^ p.seed, kGameStream);
}
inline Rng stream(std::uint64_t seed, const PolicyConfig& p, Stream s) {
  return Rng(derive_seed(seed ^ p.seed, s));
}

/// Queue of commands already in flight towards the game.
class Outbox {
 public:
  void push(TimedCommand c) { queue_.push_back(c); }
  bool empty() const { return queue_.empty(); }
  std::optional<TimedCommand> pop_due(const FrameClock& clock, std::int64_t frame) {
    if (queue_.empty() || clock.frame_of(queue_.front().t_ms) > frame) return std::nullopt;
    TimedCommand c = queue_.front();
    queue_.pop_front();
    return c;
  }

 private:
  std::deque<TimedCommand> queue_;
};

}  // namespace detail

/// Presses a key for every change of intended direction, after a reaction
/// latency. While a press is still on its way the player does not
/// re-decide (one response at a time).
class KeyboardPlayer {
 public:
  KeyboardPlayer(KeyboardProfile profile, PolicyConfig policy, std::uint64_t seed,
                 GameRules rules = {})
      : profile_(profile),
        policy_(policy),
        rules_(rules),
        latency_rng_(detail::stream(seed, policy, detail::kLatencyStream)) {
    profile_.latency.validate();
    policy_.validate();
  }

  void observe(const GameState& s, const Maze& maze, const FrameClock& clock) {
    if (!s.live() || s.frame % policy_.replan_period != 0 || !outbox_.empty()) return;
    const PolicyView view(s, maze, policy_, rules_);
    const Command want = anticipated_command(s, maze, view, rules_);
    if (want == last_issued_) return;
    last_issued_ = want;
    outbox_.push({clock.time_of(s.frame) + profile_.latency.sample(latency_rng_), want});
  }

  std::optional<TimedCommand> next_due(const FrameClock& clock, std::int64_t frame) {
    return outbox_.pop_due(clock, frame);
  }

 private:
  KeyboardProfile profile_;
  PolicyConfig policy_;
  GameRules rules_;
  Rng latency_rng_;
  std::optional<Command> last_issued_;
  detail::Outbox outbox_;
};

/// Drives the gamepad with straight, constant-speed reaches. For every change
/// of intended direction the hand, after a reaction latency, heads for the
/// centroid of that region; the tracker samples the hand at a fixed rate and
/// commands fire on region entry. A reach is not re-planned before the hand
/// has entered its target region.
class ReachPlayer {
 public:
  ReachPlayer(GamepadConfig pad, ReachProfile profile, PolicyConfig policy, std::uint64_t seed,
              GameRules rules = {})
      : trigger_(pad),
        profile_(profile),
        policy_(policy),
        rules_(rules),
        latency_rng_(detail::stream(seed, policy, detail::kLatencyStream)),
        speed_rng_(detail::stream(seed, policy, detail::kSpeedStream)),
        jitter_rng_(detail::stream(seed, policy, detail::kJitterStream)),
        hand_(pad.origin),
        segment_start_(pad.origin),
        segment_target_(pad.origin) {
    pad.validate();
    profile_.validate();
    policy_.validate();
  }

  void observe(const GameState& s, const Maze& maze, const FrameClock& clock) {
    if (s.live() && s.frame % policy_.replan_period == 0 && !reaching_ && outbox_.empty()) {
      const PolicyView view(s, maze, policy_, rules_);
      const Command want = anticipated_command(s, maze, view, rules_);
      if (want != last_target_) {
        last_target_ = want;
        reaching_ = true;
        const double t = clock.time_of(s.frame) + profile_.latency.sample(latency_rng_);
        const double factor = std::max(0.2, 1.0 + profile_.speed_cv * speed_rng_.normal());
        changes_.push_back({t, region_centroid(trigger_.config(), want), profile_.hand_speed_mps * factor});
      }
    }
    track_until(clock.time_of(s.frame + 1));
  }

  std::optional<TimedCommand> next_due(const FrameClock& clock, std::int64_t frame) {
    return outbox_.pop_due(clock, frame);
  }

  /// Distance travelled by the hand so far, in metres.
  double path_length() const { return path_length_; }

 private:
  struct Change {
    double t_ms;
    Point2 target;
    double speed_mps;
  };

  Point2 position_at(double t_ms) const {
    const double ddx = segment_target_.x - segment_start_.x;
    const double ddy = segment_target_.y - segment_start_.y;
    const double length = std::hypot(ddx, ddy);
    if (std::isinf(speed_)) return segment_target_;
    const double travelled = speed_ * (t_ms - segment_t_) / 1000.0;
    if (length <= 0.0 || travelled >= length) return segment_target_;
    const double f = travelled / length;
    return {segment_start_.x + f * ddx, segment_start_.y + f * ddy};
  }

  /// Samples the hand at every tracker tick strictly before `horizon_ms`.
  void track_until(double horizon_ms) {
    const double period = 1000.0 / profile_.sample_rate_hz;
    for (;;) {
      const double ts = static_cast<double>(tick_) * period;
      if (ts >= horizon_ms) break;
      while (!changes_.empty() && changes_.front().t_ms <= ts) {
        const Change c = changes_.front();
        changes_.pop_front();
        segment_start_ = position_at(c.t_ms);
        segment_t_ = c.t_ms;
        segment_target_ = c.target;
        speed_ = c.speed_mps;
      }
      const Point2 p = position_at(ts);
      path_length_ += std::hypot(p.x - hand_.x, p.y - hand_.y);
      hand_ = p;
      Point2 seen = p;
      if (profile_.jitter_sd_m > 0.0) {
        seen.x += jitter_rng_.normal(0.0, profile_.jitter_sd_m);
        seen.y += jitter_rng_.normal(0.0, profile_.jitter_sd_m);
      }
      if (auto c = trigger_.feed(seen)) {
        outbox_.push({ts, *c});
        if (c == last_target_) reaching_ = false;
      }
      ++tick_;
    }
  }

  RegionTrigger trigger_;
  ReachProfile profile_;
  PolicyConfig policy_;
  GameRules rules_;
  Rng latency_rng_;
  Rng speed_rng_;
  Rng jitter_rng_;
  std::optional<Command> last_target_;
  bool reaching_ = false;
  std::deque<Change> changes_;
  Point2 hand_;
  Point2 segment_start_;
  Point2 segment_target_;
  double segment_t_ = 0.0;
  double speed_ = 1.0;
  std::int64_t tick_ = 0;
  double path_length_ = 0.0;
  detail::Outbox outbox_;
};

inline EventLog play_keyboard(const Maze& maze, const FrameClock& clock, const KeyboardProfile& profile,
                              const PolicyConfig& policy, std::uint64_t seed,
                              const RunOptions& options = {}) {
  KeyboardPlayer player(profile, policy, seed, options.rules);
  return run_game(maze, clock, player, detail::game_seed(seed, policy), options);
}

struct ReachSession {
  EventLog log;
  double path_length_m = 0.0;
};

inline ReachSession play_reach_session(const Maze& maze, const FrameClock& clock,
                                       const GamepadConfig& pad, const ReachProfile& profile,
                                       const PolicyConfig& policy, std::uint64_t seed,
                                       const RunOptions& options = {}) {
  ReachPlayer player(pad, profile, policy, seed, options.rules);
  ReachSession out;
  out.log = run_game(maze, clock, player, detail::game_seed(seed, policy), options);
  out.path_length_m = player.path_length();
  return out;
}

inline EventLog play_reach(const Maze& maze, const FrameClock& clock, const GamepadConfig& pad,
                           const ReachProfile& profile, const PolicyConfig& policy, std::uint64_t seed,
                           const RunOptions& options = {}) {
  return play_reach_session(maze, clock, pad, profile, policy, seed, options).log;
}

}  // namespace pacrehab
