#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pacrehab/error.hpp"
#include "pacrehab/game/clock.hpp"
#include "pacrehab/gamepad/gamepad.hpp"
#include "pacrehab/players/calibration.hpp"
#include "pacrehab/players/players.hpp"
#include "pacrehab/players/policy.hpp"

namespace pacrehab {

/// Parses "0.25", "1/3" or "inf" (any case).
inline double parse_number(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "inf" || lower == "infinity") return std::numeric_limits<double>::infinity();
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    const double num = parse_number(text.substr(0, slash));
    const double den = parse_number(text.substr(slash + 1));
    if (den == 0.0) throw Error(ErrorCode::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw Error(ErrorCode::InvalidArgument, "not a number: '" + std::string(text) + "'");
  return v;
}

namespace detail {

inline double number_field(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number(v.get<std::string>());
  throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' must be a number");
}

inline nlohmann::json number_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline std::vector<double> number_list(const nlohmann::json& j, const char* key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  const auto& arr = j.at(key);
  if (!arr.is_array()) throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' must be a list");
  for (const auto& v : arr) {
    if (v.is_number()) out.push_back(v.get<double>());
    else if (v.is_string()) out.push_back(parse_number(v.get<std::string>()));
    else throw Error(ErrorCode::InvalidArgument, std::string("field '") + key + "' holds a non-number");
  }
  return out;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const LatencyModel& m) {
  return {{"shape", m.shape}, {"scale_ms", m.scale_ms}, {"offset_ms", m.offset_ms}};
}
inline LatencyModel latency_from_json(const nlohmann::json& j, LatencyModel d = {}) {
  d.shape = detail::number_field(j, "shape", d.shape);
  d.scale_ms = detail::number_field(j, "scale_ms", d.scale_ms);
  d.offset_ms = detail::number_field(j, "offset_ms", d.offset_ms);
  d.validate();
  return d;
}

inline nlohmann::ordered_json to_json(const KeyboardProfile& p) { return {{"latency", to_json(p.latency)}}; }
inline KeyboardProfile keyboard_from_json(const nlohmann::json& j, KeyboardProfile d = {}) {
  if (j.contains("latency")) d.latency = latency_from_json(j.at("latency"), d.latency);
  return d;
}

inline nlohmann::ordered_json to_json(const ReachProfile& p) {
  return {{"latency", to_json(p.latency)},
          {"hand_speed_mps", detail::number_value(p.hand_speed_mps)},
          {"speed_cv", p.speed_cv},
          {"jitter_sd_m", p.jitter_sd_m},
          {"sample_rate_hz", p.sample_rate_hz}};
}
inline ReachProfile reach_from_json(const nlohmann::json& j, ReachProfile d = {}) {
  if (j.contains("latency")) d.latency = latency_from_json(j.at("latency"), d.latency);
  d.hand_speed_mps = detail::number_field(j, "hand_speed_mps", d.hand_speed_mps);
  d.speed_cv = detail::number_field(j, "speed_cv", d.speed_cv);
  d.jitter_sd_m = detail::number_field(j, "jitter_sd_m", d.jitter_sd_m);
  d.sample_rate_hz = detail::number_field(j, "sample_rate_hz", d.sample_rate_hz);
  d.validate();
  return d;
}

inline nlohmann::ordered_json to_json(const PolicyConfig& p) {
  return {{"ghost_fear_radius", p.ghost_fear_radius}, {"replan_period", p.replan_period}, {"seed", p.seed}};
}
inline PolicyConfig policy_from_json(const nlohmann::json& j, PolicyConfig d = {}) {
  d.ghost_fear_radius = j.value("ghost_fear_radius", d.ghost_fear_radius);
  d.replan_period = j.value("replan_period", d.replan_period);
  d.seed = j.value("seed", d.seed);
  d.validate();
  return d;
}

/// Gamepad geometry apart from the spread, which is a plan factor.
inline nlohmann::ordered_json to_json(const GamepadConfig& g) {
  return {{"tip_half_angle_deg", g.tip_half_angle_deg}, {"radial_extent_m", g.radial_extent}};
}
inline GamepadConfig gamepad_from_json(const nlohmann::json& j, GamepadConfig d = {}) {
  d.tip_half_angle_deg = detail::number_field(j, "tip_half_angle_deg", d.tip_half_angle_deg);
  d.radial_extent = detail::number_field(j, "radial_extent_m", d.radial_extent);
  return d;
}

/// Calibrated profiles file written by the calibrate command.
struct ProfileSet {
  KeyboardProfile keyboard = calibrated_keyboard_profile();
  ReachProfile reach = calibrated_reach_profile();
};

inline nlohmann::ordered_json to_json(const ProfileSet& p) {
  return {{"schema", "pacrehab.profiles/1"}, {"keyboard", to_json(p.keyboard)}, {"reach", to_json(p.reach)}};
}
inline ProfileSet profiles_from_json(const nlohmann::json& j, ProfileSet d = {}) {
  if (j.contains("keyboard")) d.keyboard = keyboard_from_json(j.at("keyboard"), d.keyboard);
  if (j.contains("reach")) d.reach = reach_from_json(j.at("reach"), d.reach);
  return d;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

/// (spread, time_rate) levels to explore.
struct Grid {
  std::vector<double> spreads;
  std::vector<double> time_rates;
};

/// Parses "spread=0.10:0.40,trate=1/3:2/3:1".
inline Grid parse_grid(std::string_view spec) {
  Grid g;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', pos), spec.size());
    const std::string_view part = spec.substr(pos, comma - pos);
    pos = comma + 1;
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidArgument, "grid entry '" + std::string(part) + "' lacks '='");
    const std::string_view key = part.substr(0, eq);
    std::vector<double>* dst = nullptr;
    if (key == "spread") dst = &g.spreads;
    else if (key == "trate" || key == "time_rate") dst = &g.time_rates;
    else throw Error(ErrorCode::InvalidArgument, "unknown grid key '" + std::string(key) + "'");
    std::string_view values = part.substr(eq + 1);
    std::size_t vpos = 0;
    while (vpos <= values.size()) {
      const std::size_t colon = std::min(values.find(':', vpos), values.size());
      dst->push_back(parse_number(values.substr(vpos, colon - vpos)));
      vpos = colon + 1;
    }
  }
  if (g.spreads.empty() || g.time_rates.empty())
    throw Error(ErrorCode::InvalidArgument, "grid needs both spread and trate levels");
  for (double s : g.spreads)
    if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "spread levels must be positive");
  for (double t : g.time_rates)
    if (!(t > 0.0) || t > 1.0) throw Error(ErrorCode::InvalidArgument, "time_rate levels must lie in (0, 1]");
  return g;
}

struct ExperimentPlan {
  std::vector<double> spreads{0.10, 0.40};
  std::vector<double> time_rates{1.0 / 3.0, 2.0 / 3.0, 1.0};
  int games_per_cell = 30;
  /// Keyboard games before and after the tracker block.
  int baseline_pre = 15;
  int baseline_post = 15;
  std::uint64_t seed = 1;
  double base_frame_ms = 16.67;
  std::int64_t frame_cap = 50'000;
  unsigned threads = 0;
  ProfileSet profiles{};
  PolicyConfig policy{};
  GamepadConfig gamepad{};
  std::string out_dir = "run";

  int baseline_games() const { return baseline_pre + baseline_post; }

  void validate() const {
    if (spreads.empty() || time_rates.empty())
      throw Error(ErrorCode::InvalidArgument, "plan needs at least one spread and one time_rate level");
    if (games_per_cell < 1) throw Error(ErrorCode::InvalidArgument, "games_per_cell must be >= 1");
    if (baseline_pre < 0 || baseline_post < 0)
      throw Error(ErrorCode::InvalidArgument, "baseline game counts must be >= 0");
    if (frame_cap < 1) throw Error(ErrorCode::InvalidArgument, "frame_cap must be >= 1");
    for (double s : spreads) {
      GamepadConfig g = gamepad;
      g.spread_r = s;
      g.validate();
    }
    for (double t : time_rates) FrameClock(base_frame_ms, t).validate();
    profiles.keyboard.latency.validate();
    profiles.reach.validate();
    policy.validate();
  }
};

inline nlohmann::ordered_json to_json(const ExperimentPlan& p) {
  nlohmann::ordered_json j;
  j["schema"] = "pacrehab.plan/1";
  j["spread_m"] = p.spreads;
  j["time_rate"] = p.time_rates;
  j["games_per_cell"] = p.games_per_cell;
  j["baseline_games"] = {{"pre", p.baseline_pre}, {"post", p.baseline_post}};
  j["seed"] = p.seed;
  j["base_frame_ms"] = p.base_frame_ms;
  j["frame_cap"] = p.frame_cap;
  j["threads"] = p.threads;
  j["keyboard"] = to_json(p.profiles.keyboard);
  j["reach"] = to_json(p.profiles.reach);
  j["policy"] = to_json(p.policy);
  j["gamepad"] = to_json(p.gamepad);
  j["out"] = p.out_dir;
  return j;
}

inline ExperimentPlan plan_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "plan must be a JSON object");
  ExperimentPlan p;
  try {
    if (j.contains("spread_m")) p.spreads = detail::number_list(j, "spread_m");
    if (j.contains("time_rate")) p.time_rates = detail::number_list(j, "time_rate");
    p.games_per_cell = j.value("games_per_cell", p.games_per_cell);
    if (j.contains("baseline_games")) {
      const auto& b = j.at("baseline_games");
      if (b.is_number_integer()) {
        const int n = b.get<int>();
        p.baseline_pre = n / 2;
        p.baseline_post = n - n / 2;
      } else {
        p.baseline_pre = b.value("pre", p.baseline_pre);
        p.baseline_post = b.value("post", p.baseline_post);
      }
    }
    p.seed = j.value("seed", p.seed);
    p.base_frame_ms = detail::number_field(j, "base_frame_ms", p.base_frame_ms);
    p.frame_cap = j.value("frame_cap", p.frame_cap);
    p.threads = j.value("threads", p.threads);
    p.profiles = profiles_from_json(j, p.profiles);
    if (j.contains("policy")) p.policy = policy_from_json(j.at("policy"), p.policy);
    if (j.contains("gamepad")) p.gamepad = gamepad_from_json(j.at("gamepad"), p.gamepad);
    p.out_dir = j.value("out", p.out_dir);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("plan: ") + e.what());
  }
  p.validate();
  return p;
}

inline ExperimentPlan load_plan(const std::string& path) { return plan_from_json(read_json_file(path)); }

}  // namespace pacrehab
