#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace pacrehab {

/// Directional command; also used as a heading.
enum class Command : int { Up = 0, Right = 1, Down = 2, Left = 3 };

inline constexpr std::array<Command, 4> kAllCommands{Command::Up, Command::Right, Command::Down,
                                                     Command::Left};

/// Deterministic tie-break order used by both ghosts and the player policy.
inline constexpr std::array<Command, 4> kTieBreakOrder{Command::Up, Command::Left, Command::Down,
                                                       Command::Right};

constexpr Command reverse(Command c) {
  switch (c) {
    case Command::Up: return Command::Down;
    case Command::Down: return Command::Up;
    case Command::Left: return Command::Right;
    case Command::Right: return Command::Left;
  }
  return c;
}

constexpr int dx(Command c) { return c == Command::Right ? 1 : c == Command::Left ? -1 : 0; }
// Screen convention: row 0 is the top of the maze, so UP decreases the row.
constexpr int dy(Command c) { return c == Command::Down ? 1 : c == Command::Up ? -1 : 0; }

constexpr std::string_view to_string(Command c) {
  switch (c) {
    case Command::Up: return "UP";
    case Command::Right: return "RIGHT";
    case Command::Down: return "DOWN";
    case Command::Left: return "LEFT";
  }
  return "?";
}

inline std::optional<Command> parse_command(std::string_view s) {
  for (Command c : kAllCommands)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

/// A command stamped with the wall-clock time it reached the game.
struct TimedCommand {
  double t_ms = 0.0;
  Command command = Command::Up;

  friend bool operator==(const TimedCommand&, const TimedCommand&) = default;
};

}  // namespace pacrehab
