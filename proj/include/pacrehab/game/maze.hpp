#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

#include "pacrehab/error.hpp"
#include "pacrehab/game/command.hpp"

namespace pacrehab {

enum class Cell : std::uint8_t { Wall, Pellet, PowerPellet, Empty, GhostHouse, Tunnel };

struct Tile {
  int x = 0;
  int y = 0;

  friend bool operator==(const Tile&, const Tile&) = default;
};

/// Rectangular tile grid. Rows wrap horizontally only through Tunnel cells.
class Maze {
 public:
  Maze() = default;
  Maze(int width, int height, std::vector<Cell> cells, Tile pacman_spawn,
       std::vector<Tile> ghost_spawns, Tile ghost_exit, Tile fruit_tile)
      : width_(width),
        height_(height),
        cells_(std::move(cells)),
        pacman_spawn_(pacman_spawn),
        ghost_spawns_(std::move(ghost_spawns)),
        ghost_exit_(ghost_exit),
        fruit_tile_(fruit_tile) {
    if (width_ <= 0 || height_ <= 0 || cells_.size() != static_cast<std::size_t>(width_ * height_))
      throw Error(ErrorCode::InvalidArgument, "maze grid is not rectangular");
    for (Cell c : cells_)
      if (c == Cell::Pellet || c == Cell::PowerPellet) ++item_count_;
  }

  int width() const { return width_; }
  int height() const { return height_; }
  Tile pacman_spawn() const { return pacman_spawn_; }
  const std::vector<Tile>& ghost_spawns() const { return ghost_spawns_; }
  Tile ghost_exit() const { return ghost_exit_; }
  Tile fruit_tile() const { return fruit_tile_; }

  bool in_bounds(Tile t) const { return t.x >= 0 && t.y >= 0 && t.x < width_ && t.y < height_; }
  int index(Tile t) const { return t.y * width_ + t.x; }
  Tile tile_at(int index) const { return {index % width_, index / width_}; }
  Cell at(Tile t) const { return in_bounds(t) ? cells_[index(t)] : Cell::Wall; }

  /// Pellets plus power pellets at load time.
  int item_count() const { return item_count_; }
  int count(Cell kind) const {
    int n = 0;
    for (Cell c : cells_) n += c == kind;
    return n;
  }

  /// Open for actors walking the maze (Pac-Man, and ghosts once released).
  bool walkable(Tile t) const {
    const Cell c = at(t);
    return c != Cell::Wall && c != Cell::GhostHouse;
  }

  /// Neighbour in direction d, wrapping across the side edges.
  Tile neighbour(Tile t, Command d) const {
    Tile n{t.x + dx(d), t.y + dy(d)};
    if (n.x < 0) n.x += width_;
    if (n.x >= width_) n.x -= width_;
    return n;
  }

  int exit_count(Tile t) const {
    int n = 0;
    for (Command d : kAllCommands) n += walkable(neighbour(t, d));
    return n;
  }

  /// Walkable tiles reachable from `from` by 4-neighbour moves.
  std::vector<bool> reachable_from(Tile from) const {
    std::vector<bool> seen(cells_.size(), false);
    if (!walkable(from)) return seen;
    std::deque<Tile> queue{from};
    seen[index(from)] = true;
    while (!queue.empty()) {
      const Tile t = queue.front();
      queue.pop_front();
      for (Command d : kAllCommands) {
        const Tile n = neighbour(t, d);
        if (!walkable(n) || seen[index(n)]) continue;
        seen[index(n)] = true;
        queue.push_back(n);
      }
    }
    return seen;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Cell> cells_;
  Tile pacman_spawn_{};
  std::vector<Tile> ghost_spawns_;
  Tile ghost_exit_{};
  Tile fruit_tile_{};
  int item_count_ = 0;
};

/// Builds a maze from ASCII rows.
///   '#' wall, '.' pellet, 'o' power pellet, ' ' empty, 'H' or '-' ghost house,
///   'T' tunnel, 'P' Pac-Man spawn, 'G' ghost spawn (inside the house),
///   'E' ghost exit tile, 'F' fruit tile.
/// P, E and F cells are empty floor. Ghost spawns default to the exit tile.
inline Maze parse_maze(const std::vector<std::string_view>& rows) {
  if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "empty maze");
  const int height = static_cast<int>(rows.size());
  const int width = static_cast<int>(rows.front().size());
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(width * height));
  Tile pacman{-1, -1};
  Tile exit{-1, -1};
  Tile fruit{-1, -1};
  std::vector<Tile> ghosts;
  for (int y = 0; y < height; ++y) {
    if (static_cast<int>(rows[y].size()) != width)
      throw Error(ErrorCode::InvalidArgument, "maze rows differ in width");
    for (int x = 0; x < width; ++x) {
      const char ch = rows[y][x];
      switch (ch) {
        case '#': cells.push_back(Cell::Wall); break;
        case '.': cells.push_back(Cell::Pellet); break;
        case 'o': cells.push_back(Cell::PowerPellet); break;
        case ' ': cells.push_back(Cell::Empty); break;
        case 'H':
        case '-': cells.push_back(Cell::GhostHouse); break;
        case 'T': cells.push_back(Cell::Tunnel); break;
        case 'P': cells.push_back(Cell::Empty); pacman = {x, y}; break;
        case 'E': cells.push_back(Cell::Empty); exit = {x, y}; break;
        case 'F': cells.push_back(Cell::Empty); fruit = {x, y}; break;
        case 'G': cells.push_back(Cell::GhostHouse); ghosts.push_back({x, y}); break;
        default:
          throw Error(ErrorCode::InvalidArgument, std::string("unknown maze glyph '") + ch + "'");
      }
    }
  }
  if (pacman.x < 0) throw Error(ErrorCode::InvalidArgument, "maze has no Pac-Man spawn");
  if (exit.x < 0) exit = pacman;
  if (fruit.x < 0) fruit = pacman;
  return Maze(width, height, std::move(cells), pacman, std::move(ghosts), exit, fruit);
}

/// First level of the arcade maze: 240 pellets, 4 power pellets in the corners.
inline Maze load_canonical_level() {
  static const std::vector<std::string_view> rows{
      "############################",
      "#............##............#",
      "#.####.#####.##.#####.####.#",
      "#o####.#####.##.#####.####o#",
      "#.####.#####.##.#####.####.#",
      "#..........................#",
      "#.####.##.########.##.####.#",
      "#.####.##.########.##.####.#",
      "#......##....##....##......#",
      "######.##### ## #####.######",
      "######.##### ## #####.######",
      "######.##    E     ##.######",
      "######.## ###--### ##.######",
      "######.## #HHHHHH# ##.######",
      "T     .   #HGGGGH#   .     T",
      "######.## #HHHHHH# ##.######",
      "######.## ######## ##.######",
      "######.##    F     ##.######",
      "######.## ######## ##.######",
      "######.## ######## ##.######",
      "#............##............#",
      "#.####.#####.##.#####.####.#",
      "#.####.#####.##.#####.####.#",
      "#o..##.......P .......##..o#",
      "###.##.##.########.##.##.###",
      "###.##.##.########.##.##.###",
      "#......##....##....##......#",
      "#.##########.##.##########.#",
      "#.##########.##.##########.#",
      "#..........................#",
      "############################",
  };
  return parse_maze(rows);
}

}  // namespace pacrehab
