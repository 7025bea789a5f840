#pragma once

#include <cstdint>
#include <optional>

#include "pacrehab/error.hpp"
#include "pacrehab/game/state.hpp"
#include "pacrehab/rng.hpp"

namespace pacrehab {

namespace detail {

inline std::uint64_t next_random(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  return mix_seed(state);
}

inline std::int64_t dist2(Tile a, Tile b) {
  const std::int64_t x = a.x - b.x;
  const std::int64_t y = a.y - b.y;
  return x * x + y * y;
}

inline void advance_unit(UnitPos& p, Command d, const Maze& maze, const GameRules& rules) {
  p.x += dx(d);
  p.y += dy(d);
  const int span = maze.width() * rules.tile_units;
  if (p.x < 0) p.x += span;
  if (p.x >= span) p.x -= span;
}

inline int take_units(int& acc, int speed) {
  acc += speed;
  const int n = acc / 1000;
  acc %= 1000;
  return n;
}

inline Tile home_corner(std::size_t ghost, const Maze& maze) {
  switch (ghost) {
    case 0: return {maze.width() - 3, -3};
    case 1: return {2, -3};
    case 2: return {maze.width() - 1, maze.height()};
    default: return {0, maze.height()};
  }
}

/// Target tile per ghost. While chasing: direct, ambush four ahead, pincer
/// via the first ghost, and a shy ghost that retreats when close. While
/// scattering each ghost heads for its own corner.
inline Tile chase_target(const GameState& s, std::size_t ghost, const Maze& maze,
                         const GameRules& rules) {
  if (scatter_phase(s.phase_clock, rules)) return home_corner(ghost, maze);
  const Tile pac = tile_of(s.pacman.pos, maze, rules);
  const Command h = s.pacman.heading;
  switch (ghost) {
    case 0: return pac;
    case 1: return {pac.x + 4 * dx(h), pac.y + 4 * dy(h)};
    case 2: {
      const Tile pivot{pac.x + 2 * dx(h), pac.y + 2 * dy(h)};
      const Tile lead = tile_of(s.ghosts[0].pos, maze, rules);
      return {2 * pivot.x - lead.x, 2 * pivot.y - lead.y};
    }
    default: {
      const Tile me = tile_of(s.ghosts[ghost].pos, maze, rules);
      if (dist2(me, pac) > 64) return pac;
      return home_corner(3, maze);
    }
  }
}

inline Command choose_ghost_direction(GameState& s, std::size_t ghost, Tile at, Tile target,
                                      const Maze& maze) {
  const GhostState& g = s.ghosts[ghost];
  Command options[4];
  int n = 0;
  for (Command d : kTieBreakOrder)
    if (d != reverse(g.heading) && maze.walkable(maze.neighbour(at, d))) options[n++] = d;
  if (n == 0) return reverse(g.heading);
  if (g.mode == GhostMode::Frightened)
    return options[next_random(s.rng_state) % static_cast<std::uint64_t>(n)];
  Command best = options[0];
  std::int64_t best_d = dist2(maze.neighbour(at, best), target);
  for (int i = 1; i < n; ++i) {
    const std::int64_t d = dist2(maze.neighbour(at, options[i]), target);
    if (d < best_d) {
      best = options[i];
      best_d = d;
    }
  }
  return best;
}

inline void send_home(GhostState& g, std::size_t index, const Maze& maze, const GameRules& rules,
                      int delay) {
  const auto& spawns = maze.ghost_spawns();
  g.pos = centre_of(spawns.empty() ? maze.ghost_exit() : spawns[index % spawns.size()], rules);
  g.in_house = true;
  g.mode_timer = delay;
  g.heading = Command::Left;
  g.speed_acc = 0;
}

inline void reset_actors(GameState& s, const Maze& maze, const GameRules& rules) {
  s.pacman.pos = centre_of(maze.pacman_spawn(), rules);
  s.pacman.heading = Command::Left;
  s.pacman.pending_command.reset();
  s.pacman.speed_acc = 0;
  s.pacman.turn_unreported = false;
  for (std::size_t i = 0; i < s.ghosts.size(); ++i) {
    send_home(s.ghosts[i], i, maze, rules, rules.release_delays[i]);
    s.ghosts[i].mode = GhostMode::Chase;
  }
  s.power_timer = 0;
  s.ghost_chain = 0;
  s.phase_clock = 0;
}

inline void score(GameState& s, Item item, int points) {
  s.score += points;
  s.last.scored.push_back({item, points});
}

inline void eat_at(GameState& s, Tile t, const Maze& maze, const GameRules& rules) {
  Cell& item = s.items[static_cast<std::size_t>(maze.index(t))];
  if (item == Cell::Pellet || item == Cell::PowerPellet) {
    const bool power = item == Cell::PowerPellet;
    item = Cell::Empty;
    --s.pellets_remaining;
    if (power) {
      score(s, Item::PowerPellet, rules.scores.power_pellet);
      s.power_timer = rules.power_frames;
      s.ghost_chain = 0;
      for (GhostState& g : s.ghosts) {
        if (g.in_house || g.mode == GhostMode::Eaten) continue;
        g.mode = GhostMode::Frightened;
        g.heading = reverse(g.heading);
      }
    } else {
      score(s, Item::Pellet, rules.scores.pellet);
    }
    const int eaten = s.pellets_consumed();
    if (s.fruits_spawned < rules.scores.fruit_spawns &&
        s.fruits_spawned < static_cast<int>(rules.fruit_thresholds.size()) &&
        eaten == rules.fruit_thresholds[static_cast<std::size_t>(s.fruits_spawned)]) {
      ++s.fruits_spawned;
      s.fruit_timer = rules.fruit_frames;
    }
  }
  if (s.fruit_timer > 0 && t == maze.fruit_tile()) {
    s.fruit_timer = 0;
    score(s, Item::Fruit, rules.scores.fruit);
  }
}

/// Resolves contact between Pac-Man and ghost `i`. Returns true if Pac-Man died.
inline bool resolve_contact(GameState& s, std::size_t i, const Maze& maze, const GameRules& rules) {
  GhostState& g = s.ghosts[i];
  if (g.mode == GhostMode::Frightened) {
    const std::size_t link = std::min<std::size_t>(static_cast<std::size_t>(s.ghost_chain),
                                                   rules.scores.ghost_chain.size() - 1);
    score(s, Item::Ghost, rules.scores.ghost_chain[link]);
    ++s.ghost_chain;
    g.mode = GhostMode::Eaten;
    send_home(g, i, maze, rules, rules.eaten_respawn_frames);
    return false;
  }
  --s.lives;
  s.last.life_lost = true;
  reset_actors(s, maze, rules);
  return true;
}

/// Checks every active ghost for contact. Pac-Man moves before the ghosts,
/// so two actors crossing between tiles always share a tile at some check.
inline bool check_contacts(GameState& s, const Maze& maze, const GameRules& rules) {
  const Tile pac = tile_of(s.pacman.pos, maze, rules);
  for (std::size_t i = 0; i < s.ghosts.size(); ++i) {
    const GhostState& g = s.ghosts[i];
    if (g.in_house || g.mode == GhostMode::Eaten) continue;
    if (tile_of(g.pos, maze, rules) == pac && resolve_contact(s, i, maze, rules)) return true;
  }
  return false;
}

inline void move_pacman(GameState& s, const Maze& maze, const GameRules& rules) {
  PacmanState& p = s.pacman;
  bool turned = false;
  const int units = take_units(p.speed_acc, rules.pacman_speed);
  for (int i = 0; i < units; ++i) {
    if (p.pending_command && *p.pending_command == reverse(p.heading)) {
      p.heading = *p.pending_command;
      p.pending_command.reset();
      turned = true;
    }
    if (at_centre(p.pos, rules)) {
      const Tile t = tile_of(p.pos, maze, rules);
      if (p.pending_command) {
        if (*p.pending_command == p.heading) {
          p.pending_command.reset();
        } else if (maze.walkable(maze.neighbour(t, *p.pending_command))) {
          p.heading = *p.pending_command;
          p.pending_command.reset();
          turned = true;
        }
      }
      if (!maze.walkable(maze.neighbour(t, p.heading))) break;
    }
    advance_unit(p.pos, p.heading, maze, rules);
    p.moved_this_frame = true;
    if (at_centre(p.pos, rules)) {
      ++p.steps;
      eat_at(s, tile_of(p.pos, maze, rules), maze, rules);
    }
  }
  // A reversal requested while stalled still takes effect.
  if (units == 0 && p.pending_command && *p.pending_command == reverse(p.heading)) {
    p.heading = *p.pending_command;
    p.pending_command.reset();
    turned = true;
  }
  if (turned) p.turn_unreported = true;
  if (p.moved_this_frame && p.turn_unreported) {
    s.last.turn = p.heading;
    p.turn_unreported = false;
  }
}

inline void move_ghost(GameState& s, std::size_t i, const Maze& maze, const GameRules& rules) {
  GhostState& g = s.ghosts[i];
  if (g.in_house) {
    if (g.mode_timer > 0) --g.mode_timer;
    if (g.mode_timer > 0) return;
    g.in_house = false;
    g.pos = centre_of(maze.ghost_exit(), rules);
    g.heading = Command::Left;
    g.speed_acc = 0;
    if (g.mode == GhostMode::Eaten) g.mode = GhostMode::Chase;
    if (g.mode == GhostMode::Frightened && s.power_timer == 0) g.mode = GhostMode::Chase;
    return;
  }
  const int speed = g.mode == GhostMode::Frightened ? rules.frightened_speed : rules.ghost_speed;
  const int units = take_units(g.speed_acc, speed);
  const Tile target = chase_target(s, i, maze, rules);
  for (int u = 0; u < units; ++u) {
    if (at_centre(g.pos, rules)) {
      const Tile at = tile_of(g.pos, maze, rules);
      g.heading = choose_ghost_direction(s, i, at, target, maze);
    }
    advance_unit(g.pos, g.heading, maze, rules);
  }
}

}  // namespace detail

/// Advances the game by exactly one frame. `command`, if present, replaces
/// the buffered command; it takes effect at the next tile centre where the
/// direction is open, or immediately when it reverses the current heading.
inline GameState step(GameState s, const Maze& maze, std::optional<Command> command,
                      const GameRules& rules = {}) {
  if (!s.live()) throw Error(ErrorCode::StepOnFinishedGame, "step called on a finished game");
  s.last = FrameReport{};
  s.pacman.moved_this_frame = false;
  if (command) s.pacman.pending_command = *command;

  detail::move_pacman(s, maze, rules);
  bool died = s.pellets_remaining > 0 && detail::check_contacts(s, maze, rules);
  for (std::size_t i = 0; i < s.ghosts.size() && !died && s.pellets_remaining > 0; ++i) {
    detail::move_ghost(s, i, maze, rules);
    died = detail::check_contacts(s, maze, rules);
  }
  if (!died) {
    if (s.power_timer > 0 && --s.power_timer == 0) {
      for (GhostState& g : s.ghosts)
        if (g.mode == GhostMode::Frightened) g.mode = GhostMode::Chase;
    }
    if (s.fruit_timer > 0) --s.fruit_timer;
    if (s.power_timer == 0) {
      const bool before = scatter_phase(s.phase_clock, rules);
      ++s.phase_clock;
      if (scatter_phase(s.phase_clock, rules) != before) {
        for (GhostState& g : s.ghosts)
          if (!g.in_house && g.mode == GhostMode::Chase) g.heading = reverse(g.heading);
      }
    }
  }
  s.last.moved = s.pacman.moved_this_frame;
  ++s.frame;
  return s;
}

}  // namespace pacrehab
