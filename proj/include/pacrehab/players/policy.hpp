#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <vector>

#include "pacrehab/error.hpp"
#include "pacrehab/game/state.hpp"

namespace pacrehab {

struct PolicyConfig {
  /// Tiles within this maze distance of a chasing ghost are avoided.
  int ghost_fear_radius = 3;
  /// Frames between policy re-decisions.
  int replan_period = 1;
  /// Mixed into the player's random streams.
  std::uint64_t seed = 0;

  void validate() const {
    if (ghost_fear_radius < 0) throw Error(ErrorCode::InvalidArgument, "ghost_fear_radius must be >= 0");
    if (replan_period < 1) throw Error(ErrorCode::InvalidArgument, "replan_period must be >= 1");
  }
};

inline constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

/// Multi-source BFS distances from `sources` through tiles allowed by `pass`.
template <class Pass>
std::vector<int> distance_field(const Maze& maze, const std::vector<Tile>& sources, Pass&& pass) {
  std::vector<int> dist(static_cast<std::size_t>(maze.width() * maze.height()), kUnreachable);
  std::deque<Tile> queue;
  for (Tile t : sources) {
    if (!pass(t)) continue;
    auto& d = dist[static_cast<std::size_t>(maze.index(t))];
    if (d == 0) continue;
    d = 0;
    queue.push_back(t);
  }
  while (!queue.empty()) {
    const Tile t = queue.front();
    queue.pop_front();
    const int next = dist[static_cast<std::size_t>(maze.index(t))] + 1;
    for (Command c : kAllCommands) {
      const Tile n = maze.neighbour(t, c);
      if (!maze.walkable(n) || !pass(n)) continue;
      auto& d = dist[static_cast<std::size_t>(maze.index(n))];
      if (d <= next) continue;
      d = next;
      queue.push_back(n);
    }
  }
  return dist;
}

/// Everything the greedy policy needs about one game state, computed once so
/// that several candidate decision tiles can be scored cheaply.
///
/// A candidate move to neighbour N is ranked by the pair
///   (safety(N), -distance(N))
/// where safety is the maze distance from the nearest chasing ghost to N,
/// capped at fear_radius + 1, and distance is the shortest path from N to a
/// target whose tiles after N all lie outside the fear zone. Without such a
/// path the unrestricted distance plus a large penalty is used instead.
class PolicyView {
 public:
  PolicyView(const GameState& s, const Maze& maze, const PolicyConfig& cfg,
             const GameRules& rules = {})
      : maze_(&maze), radius_(cfg.ghost_fear_radius) {
    cfg.validate();
    for (const GhostState& g : s.ghosts) {
      if (g.in_house) continue;
      if (g.mode == GhostMode::Chase) chasers_.push_back(tile_of(g.pos, maze, rules));
      if (g.mode == GhostMode::Frightened && s.power_timer > 0)
        prey_.push_back(tile_of(g.pos, maze, rules));
    }
    const std::size_t n = static_cast<std::size_t>(maze.width() * maze.height());
    safety_.assign(n, radius_ + 1);
    for (Tile g : chasers_) {
      const auto field = distance_field(maze, {g}, [](Tile) { return true; });
      for (std::size_t i = 0; i < n; ++i) safety_[i] = std::min(safety_[i], field[i]);
    }
    danger_.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) danger_[i] = safety_[i] <= radius_;
    for (std::size_t i = 0; i < n; ++i)
      if (s.items[i] != Cell::Empty) pellets_.push_back(maze.tile_at(static_cast<int>(i)));

    const auto anywhere = [](Tile) { return true; };
    const auto outside_zone = [this](Tile t) { return !danger_[index(t)]; };
    pellet_any_ = distance_field(maze, pellets_, anywhere);
    pellet_safe_ = distance_field(maze, pellets_, outside_zone);
    if (!prey_.empty()) {
      prey_any_ = distance_field(maze, prey_, anywhere);
      prey_safe_ = distance_field(maze, prey_, outside_zone);
    }
  }

  /// Maze distance from the nearest chasing ghost, capped at fear_radius + 1.
  int safety(Tile t) const { return safety_[index(t)]; }

  bool in_danger(Tile t) const { return danger_[index(t)]; }

  /// True when Pac-Man at `at` should hunt frightened ghosts instead of pellets.
  bool hunting_from(Tile at) const {
    if (prey_.empty()) return false;
    return prey_any_[index(at)] < pellet_any_[index(at)];
  }

  /// Path-length score of stepping onto `n` when the targets are pellets or prey.
  int distance_from(Tile n, bool hunting) const {
    const auto& any = hunting ? prey_any_ : pellet_any_;
    const auto& safe = hunting ? prey_safe_ : pellet_safe_;
    if (any[index(n)] == 0) return 0;
    int best = kUnreachable;
    for (Command c : kAllCommands) {
      const Tile m = maze_->neighbour(n, c);
      if (!maze_->walkable(m) || danger_[index(m)]) continue;
      if (safe[index(m)] < kUnreachable) best = std::min(best, safe[index(m)] + 1);
    }
    if (best < kUnreachable) return best;
    if (any[index(n)] >= kUnreachable) return kUnreachable;
    return any[index(n)] + maze_->width() * maze_->height();
  }

  /// Best direction for Pac-Man standing on `at`. `avoid` is only chosen when
  /// no other neighbour is open.
  Command decide_at(Tile at, std::optional<Command> avoid = std::nullopt) const {
    const bool hunting = hunting_from(at);
    bool found = false;
    Command best = Command::Up;
    int best_safety = 0;
    int best_distance = 0;
    bool alternatives = false;
    for (Command c : kTieBreakOrder)
      alternatives = alternatives || (c != avoid && maze_->walkable(maze_->neighbour(at, c)));
    for (Command c : kTieBreakOrder) {
      const Tile n = maze_->neighbour(at, c);
      if (!maze_->walkable(n) || (alternatives && c == avoid)) continue;
      const int s = safety(n);
      const int d = distance_from(n, hunting);
      if (!found || s > best_safety || (s == best_safety && d < best_distance)) {
        found = true;
        best = c;
        best_safety = s;
        best_distance = d;
      }
    }
    if (!found) throw Error(ErrorCode::NoLegalMove, "Pac-Man has no open neighbour");
    return best;
  }

 private:
  std::size_t index(Tile t) const { return static_cast<std::size_t>(maze_->index(t)); }

  const Maze* maze_;
  int radius_;
  std::vector<Tile> chasers_;
  std::vector<Tile> prey_;
  std::vector<Tile> pellets_;
  std::vector<int> safety_;
  std::vector<bool> danger_;
  std::vector<int> pellet_any_, pellet_safe_, prey_any_, prey_safe_;
};

/// Greedy decision for Pac-Man's current tile.
inline Command policy_decide(const GameState& s, const Maze& maze, const PolicyConfig& cfg,
                             const GameRules& rules = {}) {
  if (!s.live()) throw Error(ErrorCode::InvalidArgument, "policy_decide on a finished game");
  return PolicyView(s, maze, cfg, rules).decide_at(tile_of(s.pacman.pos, maze, rules));
}

/// Decision a player makes ahead of time. Commands are buffered by the game,
/// so the player decides for the next tile ahead where the corridor offers a
/// choice (or where Pac-Man will be blocked) and presses early. Only when a
/// tile on the way there is threatened does the player decide for the
/// current tile instead, which may reverse Pac-Man. Otherwise a reversal is
/// only asked for while Pac-Man sits on a tile centre with nothing to look
/// ahead to: decided earlier, from a pellet map that is about to change, it
/// would apply at once and can make Pac-Man dither between two tiles.
inline Command anticipated_command(const GameState& s, const Maze& maze, const PolicyView& view,
                                   const GameRules& rules = {}) {
  const Tile here = tile_of(s.pacman.pos, maze, rules);
  const Command h = s.pacman.heading;

  Tile next = here;
  const UnitPos c = centre_of(here, rules);
  int ox = s.pacman.pos.x - c.x;
  const int span = maze.width() * rules.tile_units;
  if (ox > span / 2) ox -= span;
  if (ox < -span / 2) ox += span;
  const int along = ox * dx(h) + (s.pacman.pos.y - c.y) * dy(h);
  if (along > 0) next = maze.neighbour(here, h);

  bool threatened = view.in_danger(next);
  const int limit = maze.width() * maze.height();
  for (int i = 0; i < limit; ++i) {
    const bool straight = maze.walkable(maze.neighbour(next, h)) &&
                          maze.walkable(maze.neighbour(next, reverse(h))) &&
                          maze.exit_count(next) == 2;
    if (!straight) break;
    next = maze.neighbour(next, h);
    threatened = threatened || view.in_danger(next);
  }
  if (threatened || (next == here && s.pacman.pos == c)) return view.decide_at(here);
  return view.decide_at(next, reverse(h));
}

}  // namespace pacrehab
