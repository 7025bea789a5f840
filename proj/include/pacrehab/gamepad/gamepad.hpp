#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "pacrehab/error.hpp"
#include "pacrehab/game/command.hpp"

namespace pacrehab {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Four triangular regions in a cross around `origin`. Each triangle points
/// at the origin with its tip spread_r / 2 away along its axis (UP = +y,
/// RIGHT = +x, DOWN = -y, LEFT = -x on the table plane) and extends
/// radial_extent beyond the tip.
struct GamepadConfig {
  Point2 origin{};
  double spread_r = 0.10;
  double tip_half_angle_deg = 45.0;
  double radial_extent = 0.25;

  void validate() const {
    if (!(spread_r > 0.0)) throw Error(ErrorCode::InvalidArgument, "spread_r must be positive");
    // Above 45 degrees adjacent triangles would overlap.
    if (!(tip_half_angle_deg > 0.0) || tip_half_angle_deg > 45.0)
      throw Error(ErrorCode::InvalidArgument, "tip_half_angle must lie in (0, 45] degrees");
    if (!(radial_extent > 0.0))
      throw Error(ErrorCode::InvalidArgument, "radial_extent must be positive");
  }
};

struct HandSample {
  double t_ms = 0.0;
  double x = 0.0;
  double y = 0.0;
};

namespace detail {

/// Table-plane unit axis of a region (note: UP is +y here, unlike the maze).
inline Point2 axis_of(Command c) {
  switch (c) {
    case Command::Up: return {0.0, 1.0};
    case Command::Right: return {1.0, 0.0};
    case Command::Down: return {0.0, -1.0};
    case Command::Left: return {-1.0, 0.0};
  }
  return {};
}

}  // namespace detail

inline bool in_region(const GamepadConfig& cfg, Command region, Point2 p) {
  const Point2 a = detail::axis_of(region);
  const double rx = p.x - cfg.origin.x;
  const double ry = p.y - cfg.origin.y;
  const double along = rx * a.x + ry * a.y;
  const double across = -rx * a.y + ry * a.x;
  const double tip = cfg.spread_r / 2.0;
  if (along < tip || along > tip + cfg.radial_extent) return false;
  const double half_width = (along - tip) * std::tan(cfg.tip_half_angle_deg * std::numbers::pi / 180.0);
  return std::abs(across) <= half_width;
}

inline std::optional<Command> region_of(const GamepadConfig& cfg, Point2 p) {
  for (Command c : kAllCommands)
    if (in_region(cfg, c, p)) return c;
  return std::nullopt;
}

/// Centroid of a region's triangle: two thirds of the way from tip to base.
inline Point2 region_centroid(const GamepadConfig& cfg, Command region) {
  const Point2 a = detail::axis_of(region);
  const double d = cfg.spread_r / 2.0 + 2.0 * cfg.radial_extent / 3.0;
  return {cfg.origin.x + a.x * d, cfg.origin.y + a.y * d};
}

/// Incremental rising-edge detector; the fold behind trajectory_to_commands.
class RegionTrigger {
 public:
  explicit RegionTrigger(GamepadConfig cfg) : cfg_(cfg) {}

  /// Returns a command when the sample enters a region it was not in before.
  /// The first sample only establishes occupancy: a hand already resting in
  /// a region has not entered it.
  std::optional<Command> feed(Point2 p) {
    const auto now = region_of(cfg_, p);
    const bool rising = primed_ && now && now != inside_;
    inside_ = now;
    primed_ = true;
    return rising ? now : std::nullopt;
  }

  const GamepadConfig& config() const { return cfg_; }

 private:
  GamepadConfig cfg_;
  std::optional<Command> inside_;
  bool primed_ = false;
};

inline std::vector<TimedCommand> trajectory_to_commands(const GamepadConfig& cfg,
                                                        std::span<const HandSample> samples) {
  RegionTrigger trigger(cfg);
  std::vector<TimedCommand> out;
  for (const HandSample& s : samples)
    if (auto c = trigger.feed({s.x, s.y})) out.push_back({s.t_ms, *c});
  return out;
}

}  // namespace pacrehab
