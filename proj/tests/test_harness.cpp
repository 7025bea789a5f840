#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "pacrehab/harness/analysis.hpp"
#include "pacrehab/harness/config.hpp"
#include "pacrehab/harness/experiment.hpp"
#include "pacrehab/harness/search.hpp"

using namespace pacrehab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pacrehab_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentPlan small_plan() {
  ExperimentPlan p;
  p.spreads = {0.10, 0.40};
  p.time_rates = {1.0 / 3.0, 2.0 / 3.0, 1.0};
  p.games_per_cell = 4;
  p.baseline_pre = 4;
  p.baseline_post = 4;
  p.seed = 3;
  return p;
}

// Model fitted once on the default plan's keyboard games.
const RefModel& default_model() {
  static const RefModel m = [] {
    ExperimentPlan p;
    p.games_per_cell = 0;
    p.spreads = {0.1};
    p.time_rates = {1.0};
    std::vector<EventLog> logs;
    const Maze maze = load_canonical_level();
    for (const auto& t : plan_tasks(p)) logs.push_back(play_task(p, maze, t));
    return fit_reference(std::span<const EventLog>(logs));
  }();
  return m;
}

}  // namespace

TEST(Stats, PerfectLineGivesUnitCorrelation) {
  const std::vector<double> x{1, 2, 3, 4, 5}, y{3, 5, 7, 9, 11};
  const auto r = stats::regress(x, y);
  EXPECT_DOUBLE_EQ(r.r, 1.0);
  EXPECT_DOUBLE_EQ(r.slope, 2.0);
  EXPECT_DOUBLE_EQ(r.intercept, 1.0);
  EXPECT_NEAR(r.slope_stderr, 0.0, 1e-12);
  EXPECT_TRUE(r.warning.empty());
  const std::vector<double> same{0.2, 0.9, 0.5, 1.1};
  const auto id = stats::regress(same, same);
  EXPECT_DOUBLE_EQ(id.r, 1.0);
  EXPECT_DOUBLE_EQ(id.slope, 1.0);
  EXPECT_NEAR(id.intercept, 0.0, 1e-15);
  std::vector<double> neg(y.rbegin(), y.rend());
  EXPECT_DOUBLE_EQ(stats::pearson(x, neg), -1.0);
}

TEST(Stats, ConstantDataGivesNaNWithWarning) {
  const std::vector<double> x{1, 1, 1}, y{2, 3, 4};
  const auto a = stats::regress(x, y);
  EXPECT_TRUE(std::isnan(a.r));
  EXPECT_FALSE(a.warning.empty());
  const auto b = stats::regress(y, x);
  EXPECT_TRUE(std::isnan(b.r));
  EXPECT_DOUBLE_EQ(b.slope, 0.0);
  EXPECT_FALSE(b.warning.empty());
  EXPECT_THROW(stats::regress(x, std::vector<double>{1.0}), Error);
  EXPECT_NEAR(stats::sd(std::vector<double>{2, 4, 4, 4, 5, 5, 7, 9}), 2.138089935299395, 1e-12);
}

TEST(Config, ParseNumber) {
  EXPECT_DOUBLE_EQ(parse_number("0.25"), 0.25);
  EXPECT_DOUBLE_EQ(parse_number(" 1/3 "), 1.0 / 3.0);
  EXPECT_TRUE(std::isinf(parse_number("INF")));
  EXPECT_THROW(parse_number("1/0"), Error);
  EXPECT_THROW(parse_number("abc"), Error);
  EXPECT_THROW(parse_number(""), Error);
}

TEST(Config, ParseGrid) {
  const Grid g = parse_grid("spread=0.10:0.40,trate=1/3:2/3:1");
  EXPECT_EQ(g.spreads, (std::vector<double>{0.10, 0.40}));
  ASSERT_EQ(g.time_rates.size(), 3u);
  EXPECT_DOUBLE_EQ(g.time_rates[0], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(g.time_rates[2], 1.0);
  EXPECT_THROW(parse_grid("spread=0.1"), Error);
  EXPECT_THROW(parse_grid("spread=0.1,trate=1.5"), Error);
  EXPECT_THROW(parse_grid("spread=-0.1,trate=1"), Error);
  EXPECT_THROW(parse_grid("spread=0.1,speed=1"), Error);
  EXPECT_THROW(parse_grid("spread0.1,trate=1"), Error);
  EXPECT_THROW(parse_grid("spread=0.1:x,trate=1"), Error);
}

TEST(Config, PlanJsonRoundTrip) {
  ExperimentPlan p = small_plan();
  p.profiles.reach.hand_speed_mps = std::numeric_limits<double>::infinity();
  p.frame_cap = 1234;
  const ExperimentPlan q = plan_from_json(nlohmann::json::parse(to_json(p).dump()));
  EXPECT_EQ(q.spreads, p.spreads);
  EXPECT_EQ(q.time_rates, p.time_rates);
  EXPECT_EQ(q.games_per_cell, 4);
  EXPECT_EQ(q.baseline_pre, 4);
  EXPECT_EQ(q.frame_cap, 1234);
  EXPECT_TRUE(std::isinf(q.profiles.reach.hand_speed_mps));
  EXPECT_EQ(q.profiles.keyboard.latency.scale_ms, p.profiles.keyboard.latency.scale_ms);
  EXPECT_EQ(to_json(q).dump(), to_json(p).dump());
}

TEST(Config, PlanDefaultsAndErrors) {
  const auto p = plan_from_json(nlohmann::json::parse(R"({"time_rate": ["1/3", 1], "baseline_games": 9})"));
  EXPECT_EQ(p.baseline_pre + p.baseline_post, 9);
  EXPECT_EQ(p.games_per_cell, 30);
  EXPECT_THROW(plan_from_json(nlohmann::json::parse(R"({"time_rate": [0]})")), Error);
  EXPECT_THROW(plan_from_json(nlohmann::json::parse(R"({"spread_m": []})")), Error);
  EXPECT_THROW(plan_from_json(nlohmann::json::parse(R"({"games_per_cell": "many"})")), Error);
  EXPECT_THROW(plan_from_json(nlohmann::json::parse("[1, 2]")), Error);
}

TEST(Experiment, TasksHaveDistinctSeedsAndPaths) {
  const auto tasks = plan_tasks(small_plan());
  ASSERT_EQ(tasks.size(), 32u);
  std::set<std::uint64_t> seeds;
  std::set<std::string> paths;
  for (const auto& t : tasks) {
    seeds.insert(t.seed);
    paths.insert(t.path);
  }
  EXPECT_EQ(seeds.size(), tasks.size());
  EXPECT_EQ(paths.size(), tasks.size());
}

TEST(Experiment, RunWritesLogsAndManifestReproducibly) {
  const fs::path a = scratch("run_a"), b = scratch("run_b");
  const auto ra = cmd_run(small_plan(), a);
  ASSERT_EQ(ra.manifest.size(), 32u);
  int keyboard = 0;
  for (const auto& e : ra.manifest) {
    EXPECT_TRUE(fs::exists(a / e.task.path)) << e.task.path;
    keyboard += e.task.condition == Condition::Keyboard;
  }
  EXPECT_EQ(keyboard, 8);
  EXPECT_TRUE(fs::exists(a / "plan.json"));

  const auto back = read_manifest(a / "manifest.csv");
  ASSERT_EQ(back.size(), ra.manifest.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].hash, ra.manifest[i].hash);
    EXPECT_EQ(back[i].task.seed, ra.manifest[i].task.seed);
    EXPECT_EQ(back[i].task.time_rate, ra.manifest[i].task.time_rate);
  }
  const auto loaded = load_run(a);
  for (std::size_t i = 0; i < loaded.size(); ++i) EXPECT_EQ(hex64(log_hash(loaded[i].log)), back[i].hash);

  ExperimentPlan again = small_plan();
  again.threads = 1;
  cmd_run(again, b);
  EXPECT_EQ(slurp(a / "manifest.csv"), slurp(b / "manifest.csv"));

  // The written plan reruns to the same manifest.
  const fs::path c = scratch("run_c");
  ExperimentPlan replay = load_plan((a / "plan.json").string());
  cmd_run(replay, c);
  EXPECT_EQ(slurp(a / "manifest.csv"), slurp(c / "manifest.csv"));

  // Fitting the same directory twice gives identical model files.
  const RefModel m1 = cmd_fit(a), m2 = cmd_fit(a);
  save_model((a / "m1.json").string(), m1);
  save_model((a / "m2.json").string(), m2);
  EXPECT_EQ(slurp(a / "m1.json"), slurp(a / "m2.json"));
  EXPECT_EQ(m1.fit.games, 8);

  const auto report = cmd_analyze(a, m1, a / "analysis");
  EXPECT_TRUE(fs::exists(a / "analysis" / "games.csv"));
  EXPECT_TRUE(fs::exists(a / "analysis" / "conditions.csv"));
  EXPECT_TRUE(fs::exists(a / "analysis" / "summary.txt"));
  EXPECT_EQ(report.games.size(), 32u);
  EXPECT_EQ(report.conditions.size(), 7u);
  EXPECT_EQ(report.full.n, 24u);

  const auto scored = cmd_score(a / ra.manifest[0].task.path, m1);
  ASSERT_EQ(scored.size(), 1u);
  EXPECT_TRUE(std::isnan(scored[0].nscore));
  EXPECT_EQ(cmd_score(a / "keyboard", m1).size(), 8u);

  for (const auto& d : {a, b, c}) fs::remove_all(d);
}

TEST(Experiment, FitOnEmptyDirectoryFails) {
  const fs::path d = scratch("empty");
  fs::create_directories(d);
  try {
    cmd_fit(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
  }
  EXPECT_THROW(cmd_fit(d / "missing"), Error);
  fs::remove_all(d);
}

TEST(Analysis, KeyboardNscoreAveragesOne) {
  ExperimentPlan p = small_plan();
  p.games_per_cell = 2;
  const auto records = simulate_plan(p, load_canonical_level());
  const auto rep = analyze_games(records, default_model());
  for (const auto& c : rep.conditions)
    if (c.condition == Condition::Keyboard) {
      EXPECT_NEAR(c.mean_nscore, 1.0, 1e-12);
    }
}

TEST(FindConfig, ZeroToleranceAcceptsNothingInexact) {
  FindConfigOptions opt;
  opt.grid = {{0.10}, {1.0}};
  opt.seeds = 4;
  opt.tolerance = 0.0;
  const auto res = cmd_find_config(default_model(), opt);
  for (const auto& c : res.ranked) EXPECT_EQ(c.distance(), 0.0);
  opt.seeds = 0;
  EXPECT_THROW(cmd_find_config(default_model(), opt), Error);
}

TEST(FindConfig, InfinitelyFastHandAtFullRateQualifies) {
  FindConfigOptions opt;
  opt.grid = {{0.10}, {1.0}};
  opt.profile.hand_speed_mps = std::numeric_limits<double>::infinity();
  const auto res = cmd_find_config(default_model(), opt);
  ASSERT_EQ(res.ranked.size(), 1u) << res.cells[0].mean_nll;
}

TEST(FindConfig, NarrowSlowCellRanksFirst) {
  FindConfigOptions opt;
  opt.tolerance = 10.0;
  const auto res = cmd_find_config(default_model(), opt);
  ASSERT_EQ(res.ranked.size(), 6u);
  EXPECT_EQ(res.ranked[0].spread, 0.10);
  EXPECT_DOUBLE_EQ(res.ranked[0].time_rate, 1.0 / 3.0);
  EXPECT_LE(res.ranked[0].distance(), 0.05);
  // Mean NLL falls as either factor grows.
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_GT(res.cells[i].mean_nll, res.cells[i + 3].mean_nll);
    if (i < 2) {
      EXPECT_GT(res.cells[i].mean_nll, res.cells[i + 1].mean_nll);
    }
  }
}
