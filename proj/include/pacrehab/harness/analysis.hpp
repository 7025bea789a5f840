#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "pacrehab/harness/experiment.hpp"
#include "pacrehab/model/reference.hpp"
#include "pacrehab/stats/stats.hpp"
#include "pacrehab/telemetry/features.hpp"

namespace pacrehab {

/// Baseline logs of a directory: the keyboard games of its manifest when it
/// has one, otherwise every *.jsonl file below it in path order.
inline std::vector<EventLog> load_baseline_logs(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "not a directory: " + dir.string());
  std::vector<EventLog> logs;
  if (fs::exists(dir / "manifest.csv")) {
    for (const auto& e : read_manifest(dir / "manifest.csv"))
      if (e.task.condition == Condition::Keyboard) logs.push_back(load_log(dir / e.task.path));
  } else {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) logs.push_back(load_log(f));
  }
  if (logs.empty()) throw Error(ErrorCode::InsufficientData, "no baseline logs in " + dir.string());
  return logs;
}

/// Fits the reference model on a directory's baseline logs.
inline RefModel cmd_fit(const std::filesystem::path& dir, const GammaFitOptions& opt = {}) {
  const auto logs = load_baseline_logs(dir);
  return fit_reference(std::span<const EventLog>(logs), opt);
}

/// Per-game metrics. Likelihood figures are NaN when a channel is empty.
struct GameMetrics {
  GameTask task;
  int score = 0;
  std::int64_t frames = 0;
  double nscore = stats::kNaN;
  std::size_t n_iki = 0;
  std::size_t n_ptt = 0;
  double ll = stats::kNaN;
  double ll_iki = stats::kNaN;
  double ll_ptt = stats::kNaN;
  double nll = stats::kNaN;
  double nll_iki = stats::kNaN;
  double nll_ptt = stats::kNaN;
  /// Frame gaps between successive feature samples of either channel.
  std::vector<double> sample_gaps;
};

inline double safe_ratio(double num, double den) { return den == 0.0 ? stats::kNaN : num / den; }

inline GameMetrics score_game(const GameTask& task, const EventLog& log, const RefModel& model,
                              double keyboard_mean) {
  GameMetrics m;
  m.task = task;
  m.score = log.final_score();
  m.frames = log.frames();
  if (keyboard_mean > 0.0) m.nscore = nscore(m.score, keyboard_mean);
  const FeatureSeries f = extract_features(log);
  m.n_iki = f.iki.size();
  m.n_ptt = f.ptt.size();
  if (!f.iki.empty()) {
    m.ll_iki = iki_log_likelihood(f.iki, model);
    m.nll_iki = safe_ratio(model.ll_ref_iki_mean, m.ll_iki);
  }
  if (!f.ptt.empty()) {
    m.ll_ptt = ptt_log_likelihood(f.ptt, model);
    m.nll_ptt = safe_ratio(model.ll_ref_ptt_mean, m.ll_ptt);
  }
  if (!f.iki.empty() && !f.ptt.empty()) {
    m.ll = m.ll_iki + m.ll_ptt;
    m.nll = safe_ratio(model.ll_ref_mean, m.ll);
  }
  std::vector<std::int64_t> at(f.iki_frames);
  at.insert(at.end(), f.ptt_frames.begin(), f.ptt_frames.end());
  std::sort(at.begin(), at.end());
  for (std::size_t i = 1; i < at.size(); ++i) m.sample_gaps.push_back(static_cast<double>(at[i] - at[i - 1]));
  return m;
}

struct ConditionSummary {
  Condition condition = Condition::Keyboard;
  double spread = 0.0;
  double time_rate = 1.0;
  int games = 0;
  double mean_score = stats::kNaN;
  double mean_nscore = stats::kNaN;
  double sd_nscore = stats::kNaN;
  double mean_nll = stats::kNaN;
  double sd_nll = stats::kNaN;
  /// Games with a defined NLL.
  int scored = 0;
};

struct AnalysisReport {
  double keyboard_mean_score = stats::kNaN;
  std::vector<GameMetrics> games;
  std::vector<ConditionSummary> conditions;
  /// NLL regressed on NSCORE over the tracker games, for the full model and
  /// each single-feature model.
  stats::Regression full;
  stats::Regression iki_only;
  stats::Regression ptt_only;
  double baseline_mean_nll = stats::kNaN;
  double baseline_sd_nll = stats::kNaN;
  double baseline_sd_nscore = stats::kNaN;
  /// Sampling periods over the tracker games (all games if there are none).
  double frames_per_score_sample = stats::kNaN;
  double frames_per_ll_sample = stats::kNaN;
  double sd_frames_per_ll_sample = stats::kNaN;
  std::vector<std::string> warnings;
};

namespace detail {

inline stats::Regression regress_finite(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::isfinite(x[i]) && std::isfinite(y[i])) {
      fx.push_back(x[i]);
      fy.push_back(y[i]);
    }
  return stats::regress(fx, fy);
}

}  // namespace detail

inline AnalysisReport analyze_games(const std::vector<GameRecord>& records, const RefModel& model) {
  std::vector<double> keyboard_scores;
  for (const auto& r : records)
    if (r.task.condition == Condition::Keyboard) keyboard_scores.push_back(r.log.final_score());
  if (records.size() < 3) throw Error(ErrorCode::InsufficientData, "analysis needs at least 3 games");
  if (keyboard_scores.empty()) throw Error(ErrorCode::InsufficientData, "analysis needs keyboard games");

  AnalysisReport rep;
  rep.keyboard_mean_score = stats::mean(keyboard_scores);
  if (!(rep.keyboard_mean_score > 0.0))
    throw Error(ErrorCode::DivisionByZero, "mean keyboard score is zero");
  for (const auto& r : records) rep.games.push_back(score_game(r.task, r.log, model, rep.keyboard_mean_score));

  using Key = std::tuple<int, double, double>;
  std::map<Key, std::vector<const GameMetrics*>> groups;
  for (const auto& g : rep.games)
    groups[{static_cast<int>(g.task.condition), g.task.spread, g.task.time_rate}].push_back(&g);
  for (const auto& [key, games] : groups) {
    ConditionSummary c;
    c.condition = static_cast<Condition>(std::get<0>(key));
    c.spread = std::get<1>(key);
    c.time_rate = std::get<2>(key);
    c.games = static_cast<int>(games.size());
    std::vector<double> score, ns, nl;
    for (const auto* g : games) {
      score.push_back(g->score);
      ns.push_back(g->nscore);
      if (std::isfinite(g->nll)) nl.push_back(g->nll);
    }
    c.mean_score = stats::mean(score);
    c.mean_nscore = stats::mean(ns);
    c.sd_nscore = stats::sd(ns);
    c.mean_nll = stats::mean(nl);
    c.sd_nll = stats::sd(nl);
    c.scored = static_cast<int>(nl.size());
    rep.conditions.push_back(c);
  }

  std::vector<double> base_nll, base_ns;
  std::vector<double> ns, nll, nll_iki, nll_ptt;
  std::vector<double> frames, gaps;
  bool any_tracker = false;
  for (const auto& g : rep.games) any_tracker = any_tracker || g.task.condition == Condition::Tracker;
  for (const auto& g : rep.games) {
    if (g.task.condition == Condition::Keyboard) {
      base_ns.push_back(g.nscore);
      if (std::isfinite(g.nll)) base_nll.push_back(g.nll);
    } else {
      ns.push_back(g.nscore);
      nll.push_back(g.nll);
      nll_iki.push_back(g.nll_iki);
      nll_ptt.push_back(g.nll_ptt);
    }
    if (!any_tracker || g.task.condition == Condition::Tracker) {
      frames.push_back(static_cast<double>(g.frames));
      gaps.insert(gaps.end(), g.sample_gaps.begin(), g.sample_gaps.end());
    }
  }
  rep.baseline_mean_nll = stats::mean(base_nll);
  rep.baseline_sd_nll = stats::sd(base_nll);
  rep.baseline_sd_nscore = stats::sd(base_ns);
  rep.full = detail::regress_finite(ns, nll);
  rep.iki_only = detail::regress_finite(ns, nll_iki);
  rep.ptt_only = detail::regress_finite(ns, nll_ptt);
  for (auto* r : {&rep.full, &rep.iki_only, &rep.ptt_only})
    if (!r->warning.empty()) rep.warnings.push_back("correlation: " + r->warning);
  rep.frames_per_score_sample = stats::mean(frames);
  rep.frames_per_ll_sample = stats::mean(gaps);
  rep.sd_frames_per_ll_sample = stats::sd(gaps);
  int unscored = 0;
  for (const auto& g : rep.games) unscored += std::isfinite(g.nll) ? 0 : 1;
  if (unscored > 0)
    rep.warnings.push_back(std::to_string(unscored) + " game(s) lack IKI or PTT samples and have no NLL");
  return rep;
}

inline std::string games_csv(const AnalysisReport& rep) {
  std::ostringstream out;
  out.precision(10);
  out << "condition,phase,spread_m,time_rate,game,seed,score,frames,nscore,n_iki,n_ptt,ll,ll_iki,ll_ptt,nll,"
         "nll_iki,nll_ptt\n";
  for (const auto& g : rep.games)
    out << to_string(g.task.condition) << ',' << g.task.phase << ',' << g.task.spread << ','
        << g.task.time_rate << ',' << g.task.game << ',' << g.task.seed << ',' << g.score << ','
        << g.frames << ',' << g.nscore << ',' << g.n_iki << ',' << g.n_ptt << ',' << g.ll << ','
        << g.ll_iki << ',' << g.ll_ptt << ',' << g.nll << ',' << g.nll_iki << ',' << g.nll_ptt << '\n';
  return out.str();
}

inline std::string conditions_csv(const AnalysisReport& rep) {
  std::ostringstream out;
  out.precision(10);
  out << "condition,spread_m,time_rate,games,scored,mean_score,mean_nscore,sd_nscore,mean_nll,sd_nll\n";
  for (const auto& c : rep.conditions)
    out << to_string(c.condition) << ',' << c.spread << ',' << c.time_rate << ',' << c.games << ','
        << c.scored << ',' << c.mean_score << ',' << c.mean_nscore << ',' << c.sd_nscore << ','
        << c.mean_nll << ',' << c.sd_nll << '\n';
  return out.str();
}

inline std::string summary_text(const AnalysisReport& rep) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "games: %zu  keyboard mean score: %.1f\n", rep.games.size(),
                rep.keyboard_mean_score);
  out << line;
  std::snprintf(line, sizeof line, "baseline NLL mean %.4f sd %.4f | NSCORE sd %.4f\n", rep.baseline_mean_nll,
                rep.baseline_sd_nll, rep.baseline_sd_nscore);
  out << line << "\nper condition:\n";
  for (const auto& c : rep.conditions) {
    if (c.condition == Condition::Keyboard)
      std::snprintf(line, sizeof line, "  keyboard                    n=%-4d NSCORE %.3f (%.3f)  NLL %.3f (%.3f)\n",
                    c.games, c.mean_nscore, c.sd_nscore, c.mean_nll, c.sd_nll);
    else
      std::snprintf(line, sizeof line,
                    "  tracker spread %.3f trate %.3f n=%-4d NSCORE %.3f (%.3f)  NLL %.3f (%.3f)\n", c.spread,
                    c.time_rate, c.games, c.mean_nscore, c.sd_nscore, c.mean_nll, c.sd_nll);
    out << line;
  }
  out << "\nNLL ~ NSCORE over tracker games:\n";
  auto reg = [&](const char* name, const stats::Regression& r) {
    std::snprintf(line, sizeof line, "  %-9s n=%zu r=%.4f slope=%.4f intercept=%.4f stderr=%.4f\n", name, r.n, r.r,
                  r.slope, r.intercept, r.slope_stderr);
    out << line;
  };
  reg("full", rep.full);
  reg("iki only", rep.iki_only);
  reg("ptt only", rep.ptt_only);
  std::snprintf(line, sizeof line,
                "\nframes per SCORE sample: %.1f\nframes per LL sample: %.2f (sd %.2f)\nratio: %.1f\n",
                rep.frames_per_score_sample, rep.frames_per_ll_sample, rep.sd_frames_per_ll_sample,
                rep.frames_per_score_sample / rep.frames_per_ll_sample);
  out << line;
  for (const auto& w : rep.warnings) out << "warning: " << w << '\n';
  return out.str();
}

/// Scores a single log file, a run directory (via its manifest) or a
/// directory of logs. NSCORE is left undefined unless keyboard_mean > 0.
inline std::vector<GameMetrics> cmd_score(const std::filesystem::path& target, const RefModel& model,
                                          double keyboard_mean = 0.0) {
  namespace fs = std::filesystem;
  std::vector<GameRecord> records;
  if (fs::is_directory(target) && fs::exists(target / "manifest.csv")) {
    records = load_run(target);
  } else if (fs::is_directory(target)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(target))
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      GameRecord r;
      r.task.path = fs::relative(f, target).string();
      r.log = load_log(f);
      records.push_back(std::move(r));
    }
  } else {
    GameRecord r;
    r.task.path = target.filename().string();
    r.log = load_log(target);
    records.push_back(std::move(r));
  }
  if (records.empty()) throw Error(ErrorCode::InsufficientData, "no logs under " + target.string());
  std::vector<GameMetrics> out;
  for (const auto& r : records) out.push_back(score_game(r.task, r.log, model, keyboard_mean));
  return out;
}

inline std::string metrics_csv(const std::vector<GameMetrics>& games) {
  std::ostringstream out;
  out.precision(10);
  out << "path,score,frames,nscore,n_iki,n_ptt,ll,ll_iki,ll_ptt,nll\n";
  for (const auto& g : games)
    out << g.task.path << ',' << g.score << ',' << g.frames << ',' << g.nscore << ',' << g.n_iki << ','
        << g.n_ptt << ',' << g.ll << ',' << g.ll_iki << ',' << g.ll_ptt << ',' << g.nll << '\n';
  return out.str();
}

/// Analyzes a run directory and writes games.csv, conditions.csv and
/// summary.txt into `out_dir`.
inline AnalysisReport cmd_analyze(const std::filesystem::path& run_dir, const RefModel& model,
                                  const std::filesystem::path& out_dir) {
  const auto report = analyze_games(load_run(run_dir), model);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir.string());
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream f(out_dir / name);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + (out_dir / name).string());
    f << text;
  };
  write("games.csv", games_csv(report));
  write("conditions.csv", conditions_csv(report));
  write("summary.txt", summary_text(report));
  return report;
}

}  // namespace pacrehab
