#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pacrehab/game/clock.hpp"
#include "pacrehab/game/event_log.hpp"
#include "pacrehab/game/step.hpp"

namespace pacrehab {

/// Something that feeds timestamped commands into a running game. observe()
/// sees the state at the start of every frame and may schedule commands;
/// next_due() yields, in time order, commands whose frame has arrived.
template <class S>
concept CommandSource = requires(S& s, const GameState& st, const Maze& m, const FrameClock& c,
                                 std::int64_t frame) {
  s.observe(st, m, c);
  { s.next_due(c, frame) } -> std::same_as<std::optional<TimedCommand>>;
};

/// A fixed, pre-recorded command stream.
class CommandScript {
 public:
  CommandScript() = default;
  explicit CommandScript(std::vector<TimedCommand> commands) : commands_(std::move(commands)) {
    for (std::size_t i = 1; i < commands_.size(); ++i)
      if (commands_[i].t_ms < commands_[i - 1].t_ms)
        throw Error(ErrorCode::InvalidArgument, "command timestamps must be non-decreasing");
  }

  void observe(const GameState&, const Maze&, const FrameClock&) {}

  std::optional<TimedCommand> next_due(const FrameClock& clock, std::int64_t frame) {
    if (next_ >= commands_.size() || clock.frame_of(commands_[next_].t_ms) > frame)
      return std::nullopt;
    return commands_[next_++];
  }

 private:
  std::vector<TimedCommand> commands_;
  std::size_t next_ = 0;
};

struct RunOptions {
  GameRules rules{};
  std::int64_t frame_cap = 50'000;
};

struct NoObserver {
  void operator()(const GameState&) const {}
};

/// Plays one game to completion (level cleared, out of lives, or frame cap)
/// and returns its telemetry. `after_step` sees every post-step state.
template <CommandSource Source, class Observer = NoObserver>
EventLog run_game(const Maze& maze, const FrameClock& clock, Source& source, std::uint64_t seed,
                  const RunOptions& options = {}, Observer&& after_step = {}) {
  clock.validate();
  GameState s = initial_state(maze, seed, options.rules);
  EventLog log;
  log.events.reserve(12'000);
  double last_command_ms = -1.0;
  EndReason reason = EndReason::FrameCap;
  while (true) {
    if (s.pellets_remaining == 0) {
      reason = EndReason::Cleared;
      break;
    }
    if (s.lives == 0) {
      reason = EndReason::OutOfLives;
      break;
    }
    if (s.frame >= options.frame_cap) break;

    const std::int64_t f = s.frame;
    const double now = clock.time_of(f);
    source.observe(s, maze, clock);
    std::optional<Command> command;
    while (auto due = source.next_due(clock, f)) {
      if (due->t_ms < last_command_ms)
        throw Error(ErrorCode::InvalidArgument, "command timestamps must be non-decreasing");
      last_command_ms = due->t_ms;
      log.events.push_back({f, due->t_ms, CommandEvent{due->command}});
      command = due->command;
    }
    s = step(std::move(s), maze, command, options.rules);
    if (s.last.turn) log.events.push_back({f, now, TurnEvent{*s.last.turn}});
    log.events.push_back({f, now, MotionEvent{s.last.moved}});
    int running = s.score;
    for (auto it = s.last.scored.rbegin(); it != s.last.scored.rend(); ++it) running -= it->points;
    for (const ScoredItem& item : s.last.scored) {
      running += item.points;
      log.events.push_back({f, now, ScoreEvent{item.item, item.points, running}});
    }
    if (s.last.life_lost) log.events.push_back({f, now, LifeEvent{s.lives}});
    after_step(s);
  }
  const std::int64_t last_frame = s.frame > 0 ? s.frame - 1 : 0;
  log.events.push_back({last_frame, clock.time_of(last_frame),
                        EndEvent{s.score, reason, s.pellets_remaining, s.pacman.steps}});
  return log;
}

/// Convenience overload for a fixed command stream.
inline EventLog run_game(const Maze& maze, const FrameClock& clock,
                         std::span<const TimedCommand> commands, std::uint64_t seed,
                         const RunOptions& options = {}) {
  CommandScript script({commands.begin(), commands.end()});
  return run_game(maze, clock, script, seed, options);
}

}  // namespace pacrehab
