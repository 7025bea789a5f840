#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "pacrehab/game/command.hpp"
#include "pacrehab/game/maze.hpp"

namespace pacrehab {

struct ScoreTable {
  int pellet = 10;
  int power_pellet = 50;
  std::array<int, 4> ghost_chain{200, 400, 800, 1600};
  int fruit = 100;
  int fruit_spawns = 2;
};

/// Sum of the best yield of every item on the level: each pellet, each power
/// pellet followed by a full four-ghost chain, and every fruit.
inline int max_score(const Maze& maze, const ScoreTable& table = {}) {
  const int chain = std::accumulate(table.ghost_chain.begin(), table.ghost_chain.end(), 0);
  return maze.count(Cell::Pellet) * table.pellet +
         maze.count(Cell::PowerPellet) * (table.power_pellet + chain) +
         table.fruit_spawns * table.fruit;
}

/// Movement and timing constants. Speeds are in thousandths of a sub-tile
/// unit per frame; a tile is `tile_units` units wide.
struct GameRules {
  int tile_units = 8;
  int pacman_speed = 1000;
  int ghost_speed = 900;
  int frightened_speed = 500;
  int power_frames = 360;
  std::array<int, 4> release_delays{0, 90, 270, 450};
  int eaten_respawn_frames = 120;
  /// Alternating scatter/chase phase lengths in frames, starting with
  /// scatter; chase continues indefinitely after the last entry.
  std::array<int, 7> phase_frames{420, 1200, 420, 1200, 300, 1200, 300};
  std::array<int, 2> fruit_thresholds{70, 170};
  int fruit_frames = 570;
  int start_lives = 3;
  ScoreTable scores{};
};

enum class GhostMode : std::uint8_t { Chase, Frightened, Eaten };

enum class Item : std::uint8_t { Pellet, PowerPellet, Ghost, Fruit };

inline constexpr std::string_view to_string(Item item) {
  switch (item) {
    case Item::Pellet: return "pellet";
    case Item::PowerPellet: return "power_pellet";
    case Item::Ghost: return "ghost";
    case Item::Fruit: return "fruit";
  }
  return "?";
}

/// Position in sub-tile units. Tile centres sit on multiples of tile_units.
struct UnitPos {
  int x = 0;
  int y = 0;

  friend bool operator==(const UnitPos&, const UnitPos&) = default;
};

struct PacmanState {
  UnitPos pos;
  Command heading = Command::Left;
  std::optional<Command> pending_command;
  bool moved_this_frame = false;
  bool turn_unreported = false;
  int speed_acc = 0;
  std::int64_t steps = 0;

  friend bool operator==(const PacmanState&, const PacmanState&) = default;
};

struct GhostState {
  UnitPos pos;
  Command heading = Command::Left;
  GhostMode mode = GhostMode::Chase;
  /// Frames left in the house before release; only meaningful while in_house.
  int mode_timer = 0;
  bool in_house = true;
  int speed_acc = 0;

  friend bool operator==(const GhostState&, const GhostState&) = default;
};

struct ScoredItem {
  Item item = Item::Pellet;
  int points = 0;

  friend bool operator==(const ScoredItem&, const ScoredItem&) = default;
};

/// What happened during the most recent frame.
struct FrameReport {
  bool moved = false;
  std::optional<Command> turn;
  std::vector<ScoredItem> scored;
  bool life_lost = false;

  friend bool operator==(const FrameReport&, const FrameReport&) = default;
};

struct GameState {
  /// Number of frames stepped so far; the next step is frame `frame`.
  std::int64_t frame = 0;
  PacmanState pacman;
  std::array<GhostState, 4> ghosts;
  /// Remaining item per tile (Pellet, PowerPellet or Empty).
  std::vector<Cell> items;
  int initial_items = 0;
  int pellets_remaining = 0;
  int score = 0;
  int lives = 3;
  int power_timer = 0;
  int ghost_chain = 0;
  int fruit_timer = 0;
  int fruits_spawned = 0;
  /// Frames spent outside power windows since the last life began; drives
  /// the scatter/chase schedule.
  int phase_clock = 0;
  std::uint64_t rng_state = 0;
  FrameReport last;

  bool live() const { return lives > 0 && pellets_remaining > 0; }
  int pellets_consumed() const { return initial_items - pellets_remaining; }

  friend bool operator==(const GameState&, const GameState&) = default;
};

/// Whether chasing ghosts currently retreat to their home corners.
inline bool scatter_phase(int phase_clock, const GameRules& rules) {
  int t = phase_clock;
  for (std::size_t i = 0; i < rules.phase_frames.size(); ++i) {
    if (t < rules.phase_frames[i]) return i % 2 == 0;
    t -= rules.phase_frames[i];
  }
  return false;
}

inline UnitPos centre_of(Tile t, const GameRules& rules) {
  return {t.x * rules.tile_units, t.y * rules.tile_units};
}

/// Tile whose centre is nearest to the position.
inline Tile tile_of(UnitPos p, const Maze& maze, const GameRules& rules) {
  const int u = rules.tile_units;
  int x = (p.x + u / 2) / u;
  if (x >= maze.width()) x -= maze.width();
  return {x, (p.y + u / 2) / u};
}

inline bool at_centre(UnitPos p, const GameRules& rules) {
  return p.x % rules.tile_units == 0 && p.y % rules.tile_units == 0;
}

inline GameState initial_state(const Maze& maze, std::uint64_t seed, const GameRules& rules = {}) {
  GameState s;
  s.items.resize(static_cast<std::size_t>(maze.width() * maze.height()), Cell::Empty);
  for (int i = 0; i < maze.width() * maze.height(); ++i) {
    const Cell c = maze.at(maze.tile_at(i));
    if (c == Cell::Pellet || c == Cell::PowerPellet) s.items[static_cast<std::size_t>(i)] = c;
  }
  s.initial_items = maze.item_count();
  s.pellets_remaining = s.initial_items;
  s.lives = rules.start_lives;
  s.rng_state = seed;
  s.pacman.pos = centre_of(maze.pacman_spawn(), rules);
  const auto& spawns = maze.ghost_spawns();
  for (std::size_t i = 0; i < s.ghosts.size(); ++i) {
    GhostState& g = s.ghosts[i];
    g.pos = centre_of(spawns.empty() ? maze.ghost_exit() : spawns[i % spawns.size()], rules);
    g.in_house = true;
    g.mode_timer = rules.release_delays[i];
  }
  return s;
}

}  // namespace pacrehab
