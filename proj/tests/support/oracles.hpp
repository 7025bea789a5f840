#pragma once

// Independent re-implementations used as test oracles. They deliberately
// share no code with the library beyond the data they inspect.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pacrehab/game/maze.hpp"
#include "pacrehab/game/run.hpp"
#include "pacrehab/rng.hpp"

namespace oracle {

/// Re-parses raw JSON-lines text and computes IKI and PTT from frame lists:
/// IKI from adjacent command frames, PTT by counting motionless frames that
/// fall strictly between adjacent turn frames.
inline std::pair<std::vector<double>, std::vector<double>> extract(const std::string& jsonl) {
  std::vector<long long> commands, turns;
  std::vector<long long> still;
  std::istringstream in(jsonl);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    const std::string kind = j["kind"];
    const long long f = j["frame"];
    if (kind == "command") commands.push_back(f);
    if (kind == "turn") turns.push_back(f);
    if (kind == "motion" && !j["moved"].get<bool>()) still.push_back(f);
  }
  std::vector<double> iki, ptt;
  for (std::size_t i = 0; i + 1 < commands.size(); ++i) iki.push_back(double(commands[i + 1] - commands[i]));
  for (std::size_t i = 0; i + 1 < turns.size(); ++i) {
    const auto lo = std::upper_bound(still.begin(), still.end(), turns[i]);
    const auto hi = std::lower_bound(still.begin(), still.end(), turns[i + 1]);
    ptt.push_back(hi > lo ? double(hi - lo) : 0.0);
  }
  return {iki, ptt};
}

/// Flood fill over a character grid with horizontal wrap-around; '#', 'H',
/// '-' and 'G' block movement.
inline std::vector<std::vector<bool>> flood(const std::vector<std::string>& grid, int sx, int sy) {
  const int h = int(grid.size()), w = int(grid[0].size());
  auto open = [&](int x, int y) {
    if (y < 0 || y >= h) return false;
    const char c = grid[y][x];
    return c != '#' && c != 'H' && c != '-' && c != 'G';
  };
  std::vector<std::vector<bool>> seen(h, std::vector<bool>(w, false));
  std::deque<std::pair<int, int>> q{{sx, sy}};
  seen[sy][sx] = true;
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop_front();
    const int d[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (auto& v : d) {
      const int nx = (x + v[0] + w) % w, ny = y + v[1];
      if (!open(nx, ny) || seen[ny][nx]) continue;
      seen[ny][nx] = true;
      q.push_back({nx, ny});
    }
  }
  return seen;
}

/// Character rendering of a maze's cells (P, E, F and G markers are lost).
inline std::vector<std::string> render(const pacrehab::Maze& m) {
  std::vector<std::string> rows(m.height(), std::string(m.width(), ' '));
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      switch (m.at({x, y})) {
        case pacrehab::Cell::Wall: rows[y][x] = '#'; break;
        case pacrehab::Cell::Pellet: rows[y][x] = '.'; break;
        case pacrehab::Cell::PowerPellet: rows[y][x] = 'o'; break;
        case pacrehab::Cell::GhostHouse: rows[y][x] = 'H'; break;
        case pacrehab::Cell::Tunnel: rows[y][x] = 'T'; break;
        case pacrehab::Cell::Empty: rows[y][x] = ' '; break;
      }
    }
  return rows;
}

/// A game driven by a random command script: random gaps, random commands,
/// random time rate.
inline pacrehab::EventLog random_log(std::uint64_t seed, int commands = 150) {
  pacrehab::Rng rng(seed);
  std::vector<pacrehab::TimedCommand> script;
  double t = 0.0;
  for (int i = 0; i < commands; ++i) {
    // Some gaps are zero so that several commands can share a frame.
    if (rng.uniform() >= 0.1) t += rng.uniform(0.0, 900.0);
    script.push_back({t, static_cast<pacrehab::Command>(rng.below(4))});
  }
  const double rates[] = {1.0 / 3.0, 2.0 / 3.0, 1.0};
  const pacrehab::FrameClock clock(16.67, rates[rng.below(3)]);
  return pacrehab::run_game(pacrehab::load_canonical_level(), clock, script, rng.below(1u << 30));
}

/// Rules under which ghosts never leave the house.
inline pacrehab::GameRules ghostless_rules() {
  pacrehab::GameRules r;
  r.release_delays = {1 << 30, 1 << 30, 1 << 30, 1 << 30};
  return r;
}

}  // namespace oracle
