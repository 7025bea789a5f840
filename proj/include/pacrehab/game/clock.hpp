#pragma once

#include <cmath>
#include <cstdint>

#include "pacrehab/error.hpp"

namespace pacrehab {

/// Maps wall-clock time to game frames. Slowing the game (time_rate < 1)
/// stretches every frame; the game logic itself is frame-stepped.
struct FrameClock {
  double base_frame_ms = 16.67;
  double time_rate = 1.0;

  FrameClock() = default;
  FrameClock(double base_ms, double rate) : base_frame_ms(base_ms), time_rate(rate) { validate(); }

  void validate() const {
    if (!(base_frame_ms > 0.0) || !std::isfinite(base_frame_ms))
      throw Error(ErrorCode::InvalidArgument, "base_frame_ms must be positive");
    if (!(time_rate > 0.0) || time_rate > 1.0)
      throw Error(ErrorCode::InvalidArgument, "time_rate must lie in (0, 1]");
  }

  double frame_ms() const { return base_frame_ms / time_rate; }

  /// Wall-clock start of a frame.
  double time_of(std::int64_t frame) const { return static_cast<double>(frame) * frame_ms(); }

  /// floor(t / frame duration), nudged so that exact frame boundaries are not
  /// lost to rounding in the division.
  std::int64_t frame_of(double t_ms) const {
    const double d = frame_ms();
    auto f = static_cast<std::int64_t>(std::floor(t_ms / d));
    if (time_of(f + 1) <= t_ms) ++f;
    if (f > 0 && time_of(f) > t_ms) --f;
    return f;
  }
};

}  // namespace pacrehab
