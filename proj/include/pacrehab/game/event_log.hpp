#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pacrehab/error.hpp"
#include "pacrehab/game/command.hpp"
#include "pacrehab/game/state.hpp"

namespace pacrehab {

enum class EndReason : std::uint8_t { Cleared, OutOfLives, FrameCap };

inline constexpr std::string_view to_string(EndReason r) {
  switch (r) {
    case EndReason::Cleared: return "cleared";
    case EndReason::OutOfLives: return "out_of_lives";
    case EndReason::FrameCap: return "frame_cap";
  }
  return "?";
}

struct CommandEvent {
  Command command = Command::Up;
  friend bool operator==(const CommandEvent&, const CommandEvent&) = default;
};
struct TurnEvent {
  Command heading = Command::Up;
  friend bool operator==(const TurnEvent&, const TurnEvent&) = default;
};
struct MotionEvent {
  bool moved = false;
  friend bool operator==(const MotionEvent&, const MotionEvent&) = default;
};
struct ScoreEvent {
  Item item = Item::Pellet;
  int points = 0;
  int total = 0;
  friend bool operator==(const ScoreEvent&, const ScoreEvent&) = default;
};
struct LifeEvent {
  int lives = 0;
  friend bool operator==(const LifeEvent&, const LifeEvent&) = default;
};
struct EndEvent {
  int score = 0;
  EndReason reason = EndReason::Cleared;
  int pellets_remaining = 0;
  std::int64_t steps = 0;
  friend bool operator==(const EndEvent&, const EndEvent&) = default;
};

using EventPayload = std::variant<CommandEvent, TurnEvent, MotionEvent, ScoreEvent, LifeEvent, EndEvent>;

struct Event {
  std::int64_t frame = 0;
  double t_ms = 0.0;
  EventPayload payload;

  friend bool operator==(const Event&, const Event&) = default;
};

inline constexpr std::string_view kind_name(const EventPayload& p) {
  constexpr std::string_view names[] = {"command", "turn", "motion", "score", "life", "end"};
  return names[p.index()];
}

/// Telemetry of one game, in emission order (non-decreasing frames).
struct EventLog {
  std::vector<Event> events;

  template <class T>
  std::vector<const Event*> of() const {
    std::vector<const Event*> out;
    for (const Event& e : events)
      if (std::holds_alternative<T>(e.payload)) out.push_back(&e);
    return out;
  }

  const EndEvent* end() const {
    if (events.empty()) return nullptr;
    return std::get_if<EndEvent>(&events.back().payload);
  }
  int final_score() const { return end() ? end()->score : 0; }
  std::int64_t frames() const { return events.empty() ? 0 : events.back().frame + 1; }

  friend bool operator==(const EventLog&, const EventLog&) = default;
};

// JSON-lines codec. Each record is
//   {"frame": int, "t_ms": float, "kind": "...", <payload fields>}
// with payload fields:
//   command: "command": "UP"|"RIGHT"|"DOWN"|"LEFT"
//   turn:    "heading": same values
//   motion:  "moved": bool
//   score:   "item": "pellet"|"power_pellet"|"ghost"|"fruit", "points": int, "total": int
//   life:    "lives": int
//   end:     "score": int, "reason": "cleared"|"out_of_lives"|"frame_cap",
//            "pellets_remaining": int, "steps": int

inline nlohmann::ordered_json to_json(const Event& e) {
  nlohmann::ordered_json j;
  j["frame"] = e.frame;
  j["t_ms"] = e.t_ms;
  j["kind"] = kind_name(e.payload);
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CommandEvent>) {
          j["command"] = to_string(p.command);
        } else if constexpr (std::is_same_v<T, TurnEvent>) {
          j["heading"] = to_string(p.heading);
        } else if constexpr (std::is_same_v<T, MotionEvent>) {
          j["moved"] = p.moved;
        } else if constexpr (std::is_same_v<T, ScoreEvent>) {
          j["item"] = to_string(p.item);
          j["points"] = p.points;
          j["total"] = p.total;
        } else if constexpr (std::is_same_v<T, LifeEvent>) {
          j["lives"] = p.lives;
        } else {
          j["score"] = p.score;
          j["reason"] = to_string(p.reason);
          j["pellets_remaining"] = p.pellets_remaining;
          j["steps"] = p.steps;
        }
      },
      e.payload);
  return j;
}

namespace detail {

inline Command command_field(const nlohmann::json& j, const char* key) {
  const auto c = parse_command(j.at(key).get<std::string>());
  if (!c) throw Error(ErrorCode::MalformedLog, std::string("bad direction in '") + key + "'");
  return *c;
}

template <class Enum, std::size_t N>
Enum enum_field(const nlohmann::json& j, const char* key, const Enum (&values)[N]) {
  const auto s = j.at(key).get<std::string>();
  for (Enum v : values)
    if (to_string(v) == s) return v;
  throw Error(ErrorCode::MalformedLog, "unknown value '" + s + "' for '" + key + "'");
}

}  // namespace detail

inline Event event_from_json(const nlohmann::json& j) {
  try {
    Event e;
    e.frame = j.at("frame").get<std::int64_t>();
    e.t_ms = j.at("t_ms").get<double>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "command") {
      e.payload = CommandEvent{detail::command_field(j, "command")};
    } else if (kind == "turn") {
      e.payload = TurnEvent{detail::command_field(j, "heading")};
    } else if (kind == "motion") {
      e.payload = MotionEvent{j.at("moved").get<bool>()};
    } else if (kind == "score") {
      static constexpr Item items[] = {Item::Pellet, Item::PowerPellet, Item::Ghost, Item::Fruit};
      e.payload = ScoreEvent{detail::enum_field(j, "item", items), j.at("points").get<int>(),
                             j.at("total").get<int>()};
    } else if (kind == "life") {
      e.payload = LifeEvent{j.at("lives").get<int>()};
    } else if (kind == "end") {
      static constexpr EndReason reasons[] = {EndReason::Cleared, EndReason::OutOfLives,
                                              EndReason::FrameCap};
      e.payload = EndEvent{j.at("score").get<int>(), detail::enum_field(j, "reason", reasons),
                           j.at("pellets_remaining").get<int>(), j.at("steps").get<std::int64_t>()};
    } else {
      throw Error(ErrorCode::MalformedLog, "unknown event kind '" + kind + "'");
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::MalformedLog, ex.what());
  }
}

inline void write_jsonl(std::ostream& out, const EventLog& log) {
  for (const Event& e : log.events) out << to_json(e).dump() << '\n';
}

inline std::string to_jsonl(const EventLog& log) {
  std::ostringstream out;
  write_jsonl(out, log);
  return out.str();
}

inline EventLog read_jsonl(std::istream& in) {
  EventLog log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      log.events.push_back(event_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::MalformedLog, "line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return log;
}

inline EventLog parse_jsonl(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_jsonl(in);
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Hash of the serialized JSON-lines form.
inline std::uint64_t log_hash(const EventLog& log) { return fnv1a(to_jsonl(log)); }

inline std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xF];
  return s;
}

}  // namespace pacrehab
