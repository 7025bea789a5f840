#pragma once

#include <stdexcept>
#include <string>

namespace pacrehab {

enum class ErrorCode {
  InvalidArgument,
  StepOnFinishedGame,
  NoLegalMove,
  DivisionByZero,
  DegenerateSample,
  InsufficientSamples,
  NonConvergence,
  AllZeroSamples,
  EmptyFeatures,
  ZeroLL,
  InsufficientData,
  MalformedLog,
  Io,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::StepOnFinishedGame: return "StepOnFinishedGame";
    case ErrorCode::NoLegalMove: return "NoLegalMove";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::AllZeroSamples: return "AllZeroSamples";
    case ErrorCode::EmptyFeatures: return "EmptyFeatures";
    case ErrorCode::ZeroLL: return "ZeroLL";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::MalformedLog: return "MalformedLog";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pacrehab
