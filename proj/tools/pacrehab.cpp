// Command-line front end: run experiments, fit the baseline model, score and
// analyze sessions, search interaction parameters, calibrate player profiles.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pacrehab/harness/analysis.hpp"
#include "pacrehab/harness/config.hpp"
#include "pacrehab/harness/experiment.hpp"
#include "pacrehab/harness/search.hpp"

namespace {

using namespace pacrehab;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNonConvergence = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvergence:
      return kExitNonConvergence;
    case ErrorCode::Io:
      return kExitIo;
    default:
      return kExitInvalid;
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
}

void print_model(const RefModel& m) {
  std::printf("IKI  Gamma k=%.4f mu=%.4f gamma=%.4f%s\n", m.iki.k, m.iki.mu, m.iki.gamma_scale,
              m.fit.gamma_location_fallback ? " (location fallback)" : "");
  std::printf("PTT  Exp lambda=%.4f\n", m.ptt.lambda_rate);
  std::printf("ll_ref_mean=%.6f over %d games (%d IKI, %d PTT samples)\n", m.ll_ref_mean, m.fit.games,
              m.fit.iki_samples, m.fit.ptt_samples);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gameplay-model toolkit for reach-controlled Pac-Man sessions"};
  app.require_subcommand(1);

  std::string plan_file, model_file, out, profile_file, grid_spec, target;
  int seeds = 0;
  std::uint64_t master_seed = 1;
  double tolerance = 0.05;
  double keyboard_mean = 0.0;
  unsigned threads = 0;

  auto* run = app.add_subcommand("run", "Simulate an experiment plan and write telemetry");
  run->add_option("--plan", plan_file, "Experiment plan (JSON)")->required();
  run->add_option("--out", out, "Output directory (overrides the plan)");
  run->add_option("--seeds", seeds, "Games per grid cell (overrides the plan)");
  run->add_option("--threads", threads, "Worker threads, 0 = all cores");

  auto* fit = app.add_subcommand("fit", "Fit the reference model on baseline logs");
  fit->add_option("dir", target, "Run directory or directory of baseline logs")->required();
  fit->add_option("--model,--out", model_file, "Model file to write")->required();

  auto* score = app.add_subcommand("score", "Score logs against a reference model");
  score->add_option("path", target, "Log file, run directory or log directory")->required();
  score->add_option("--model", model_file, "Reference model file")->required();
  score->add_option("--keyboard-mean", keyboard_mean, "Mean keyboard score for NSCORE");
  score->add_option("--out", out, "CSV output file (default stdout)");

  auto* analyze = app.add_subcommand("analyze", "Per-condition statistics and correlations for a run");
  analyze->add_option("dir", target, "Run directory")->required();
  analyze->add_option("--model", model_file, "Reference model file")->required();
  analyze->add_option("--out", out, "Report directory (default: <dir>/analysis)");

  auto* find = app.add_subcommand("find-config", "Find (spread, time_rate) cells with baseline-like play");
  find->add_option("--model", model_file, "Reference model file")->required();
  find->add_option("--profile", profile_file, "Profiles file (reach profile is used)");
  find->add_option("--grid", grid_spec, "Grid, e.g. spread=0.10:0.40,trate=1/3:2/3:1");
  find->add_option("--tolerance", tolerance, "Accept cells with |mean NLL - 1| <= tolerance");
  find->add_option("--seeds", seeds, "Games per cell");
  find->add_option("--seed", master_seed, "Master seed");
  find->add_option("--threads", threads, "Worker threads, 0 = all cores");
  find->add_option("--out", out, "CSV output file for all cells");

  auto* calibrate = app.add_subcommand("calibrate", "Calibrate keyboard latency to the target IKI distribution");
  calibrate->add_option("--profile", profile_file, "Starting profiles file (default: uncalibrated defaults)");
  calibrate->add_option("--out", out, "Profiles file to write")->required();
  calibrate->add_option("--seeds", seeds, "Games per evaluation");
  calibrate->add_option("--seed", master_seed, "Master seed");
  calibrate->add_option("--threads", threads, "Worker threads, 0 = all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*run) {
      ExperimentPlan plan = load_plan(plan_file);
      if (!out.empty()) plan.out_dir = out;
      if (seeds > 0) plan.games_per_cell = seeds;
      if (run->count("--threads")) plan.threads = threads;
      plan.validate();
      const auto result = cmd_run(plan);
      std::printf("wrote %zu logs to %s\n", result.manifest.size(), result.dir.string().c_str());
    } else if (*fit) {
      const RefModel m = cmd_fit(target);
      save_model(model_file, m);
      print_model(m);
      if (m.fit.gamma_location_fallback)
        std::fprintf(stderr, "warning: gamma location could not be estimated; fell back to a fixed location\n");
    } else if (*score) {
      const RefModel m = load_model(model_file);
      write_text(out, metrics_csv(cmd_score(target, m, keyboard_mean)));
    } else if (*analyze) {
      const RefModel m = load_model(model_file);
      const std::filesystem::path dir(target);
      const auto report = cmd_analyze(dir, m, out.empty() ? dir / "analysis" : std::filesystem::path(out));
      std::cout << summary_text(report);
    } else if (*find) {
      FindConfigOptions opt;
      if (!profile_file.empty()) opt.profile = profiles_from_json(read_json_file(profile_file)).reach;
      if (!grid_spec.empty()) opt.grid = parse_grid(grid_spec);
      opt.tolerance = tolerance;
      if (seeds > 0) opt.seeds = seeds;
      opt.seed = master_seed;
      opt.threads = threads;
      const RefModel m = load_model(model_file);
      const auto res = cmd_find_config(m, opt);
      std::string csv = "spread_m,time_rate,games,scored,mean_nll,sd_nll,within_tolerance\n";
      char line[256];
      for (const auto& c : res.cells) {
        const bool ok = std::isfinite(c.mean_nll) && c.distance() <= opt.tolerance;
        std::snprintf(line, sizeof line, "%.6g,%.6g,%d,%d,%.6f,%.6f,%d\n", c.spread, c.time_rate, c.games, c.scored,
                      c.mean_nll, c.sd_nll, ok ? 1 : 0);
        csv += line;
      }
      if (!out.empty()) write_text(out, csv);
      std::printf("%zu of %zu cells within tolerance %.4g\n", res.ranked.size(), res.cells.size(), opt.tolerance);
      int rank = 1;
      for (const auto& c : res.ranked)
        std::printf("%2d. spread %.3f m  time_rate %.4f  mean NLL %.4f (sd %.4f)\n", rank++, c.spread, c.time_rate,
                    c.mean_nll, c.sd_nll);
    } else if (*calibrate) {
      ProfileSet start;
      start.keyboard = KeyboardProfile{};
      start.reach = ReachProfile{};
      if (!profile_file.empty()) start = profiles_from_json(read_json_file(profile_file), start);
      CalibrationOptions opt;
      if (seeds > 0) opt.games = seeds;
      opt.seed = master_seed;
      opt.threads = threads;
      const auto res = cmd_calibrate(start, PolicyConfig{}, opt);
      write_json_file(out, to_json(res.profiles));
      const auto& lat = res.profiles.keyboard.latency;
      const auto& iki = res.result.iki;
      std::printf("latency shape %.4f scale %.4f ms offset %.4f ms\n", lat.shape, lat.scale_ms, lat.offset_ms);
      std::printf("IKI mean %.2f sd %.2f k %.3f (targets %.2f, %.2f, %.3f) after %d evaluations\n", iki.mean, iki.sd,
                  iki.fit.params.k, opt.target.mean(), std::sqrt(opt.target.variance()), opt.target.k,
                  res.result.evaluations);
      if (!res.result.within_tolerance()) {
        std::fprintf(stderr, "calibration did not reach the target within tolerance\n");
        return kExitNonConvergence;
      }
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitOk;
}
