#include <gtest/gtest.h>

#include <vector>

#include "pacrehab/gamepad/gamepad.hpp"
#include "pacrehab/rng.hpp"

using namespace pacrehab;

namespace {

std::vector<HandSample> line(Point2 a, Point2 b, int n, double t0 = 0.0) {
  std::vector<HandSample> out;
  for (int i = 0; i <= n; ++i) {
    const double f = double(i) / n;
    out.push_back({t0 + i, a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)});
  }
  return out;
}

std::vector<HandSample> concat(std::initializer_list<std::vector<HandSample>> parts) {
  std::vector<HandSample> out;
  double t = 0.0;
  for (const auto& p : parts)
    for (HandSample s : p) {
      s.t_ms = t++;
      out.push_back(s);
    }
  return out;
}

std::vector<Command> commands_of(const GamepadConfig& cfg, const std::vector<HandSample>& path) {
  std::vector<Command> out;
  for (const auto& c : trajectory_to_commands(cfg, path)) out.push_back(c.command);
  return out;
}

}  // namespace

TEST(Gamepad, OriginIsInNoRegion) {
  const GamepadConfig cfg;
  EXPECT_FALSE(region_of(cfg, {0.0, 0.0}).has_value());
  EXPECT_FALSE(region_of(cfg, {0.0, 0.049}).has_value());
}

TEST(Gamepad, PointsBeyondEachTip) {
  const GamepadConfig cfg;
  EXPECT_EQ(region_of(cfg, {0.0, 0.051}), Command::Up);
  EXPECT_EQ(region_of(cfg, {0.0, -0.051}), Command::Down);
  EXPECT_EQ(region_of(cfg, {0.051, 0.0}), Command::Right);
  EXPECT_EQ(region_of(cfg, {-0.051, 0.0}), Command::Left);
  EXPECT_FALSE(region_of(cfg, {0.0, 0.05 + 0.25 + 1e-6}).has_value());
  // Beside the tip, outside the wedge.
  EXPECT_FALSE(region_of(cfg, {0.02, 0.06}).has_value());
  EXPECT_EQ(region_of(cfg, {0.01, 0.07}), Command::Up);
}

TEST(Gamepad, CentroidsLieInTheirRegion) {
  GamepadConfig cfg;
  cfg.origin = {0.3, -0.2};
  for (Command c : kAllCommands) EXPECT_EQ(region_of(cfg, region_centroid(cfg, c)), c);
}

TEST(Gamepad, RegionsAreDisjointOnAGrid) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    GamepadConfig cfg;
    cfg.spread_r = rng.uniform(0.01, 0.5);
    cfg.tip_half_angle_deg = trial == 0 ? 45.0 : rng.uniform(5.0, 45.0);
    cfg.radial_extent = rng.uniform(0.05, 0.5);
    const double span = cfg.spread_r / 2 + cfg.radial_extent;
    for (int i = 0; i < 100; ++i)
      for (int j = 0; j < 100; ++j) {
        const Point2 p{-span + 2 * span * i / 99.0, -span + 2 * span * j / 99.0};
        int inside = 0;
        for (Command c : kAllCommands) inside += in_region(cfg, c, p);
        ASSERT_LE(inside, 1) << trial << " " << p.x << "," << p.y;
      }
  }
}

TEST(Gamepad, ConfigValidation) {
  GamepadConfig cfg;
  cfg.tip_half_angle_deg = 50.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.spread_r = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Gamepad, DwellingEmitsOneCommand) {
  const GamepadConfig cfg;
  const Point2 up = region_centroid(cfg, Command::Up);
  const auto path = concat({line({0, 0}, up, 20), line(up, {up.x + 0.01, up.y}, 50)});
  EXPECT_EQ(commands_of(cfg, path), (std::vector<Command>{Command::Up}));
}

TEST(Gamepad, UpThenLeft) {
  const GamepadConfig cfg;
  const Point2 up = region_centroid(cfg, Command::Up), left = region_centroid(cfg, Command::Left);
  const auto path = concat({line({0, 0}, up, 20), line(up, {0, 0}, 20), line({0, 0}, left, 20)});
  EXPECT_EQ(commands_of(cfg, path), (std::vector<Command>{Command::Up, Command::Left}));
}

TEST(Gamepad, StartingInsideARegionDoesNotFire) {
  const GamepadConfig cfg;
  const std::vector<HandSample> path{{0.0, 0.0, -0.06}, {1.0, 0.0, 0.06}};
  EXPECT_EQ(commands_of(cfg, path), (std::vector<Command>{Command::Up}));
}

TEST(Gamepad, ReentryTriggersAgain) {
  const GamepadConfig cfg;
  const Point2 up = region_centroid(cfg, Command::Up);
  const auto path = concat({line({0, 0}, up, 10), line(up, {0, 0}, 10), line({0, 0}, up, 10)});
  EXPECT_EQ(commands_of(cfg, path), (std::vector<Command>{Command::Up, Command::Up}));
}

TEST(Gamepad, CommandCarriesEntrySampleTime) {
  const GamepadConfig cfg;
  const std::vector<HandSample> path{{0.0, 0.0, 0.0}, {5.0, 0.0, 0.03}, {9.0, 0.0, 0.08}, {12.0, 0.0, 0.1}};
  const auto cmds = trajectory_to_commands(cfg, path);
  ASSERT_EQ(cmds.size(), 1u);
  EXPECT_DOUBLE_EQ(cmds[0].t_ms, 9.0);
}

TEST(Gamepad, ScaleCovariance) {
  Rng rng(8);
  GamepadConfig cfg;
  std::vector<HandSample> path;
  for (int i = 0; i < 400; ++i) path.push_back({double(i), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)});
  const auto base = commands_of(cfg, path);
  ASSERT_FALSE(base.empty());
  for (double s : {0.5, 2.0, 3.7}) {
    GamepadConfig scaled = cfg;
    scaled.spread_r *= s;
    scaled.radial_extent *= s;
    auto p = path;
    for (auto& h : p) {
      h.x *= s;
      h.y *= s;
    }
    EXPECT_EQ(commands_of(scaled, p), base) << s;
  }
}
