#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tariffcast {

enum class ErrorCode {
  InvalidArgument,
  LagTooLarge,
  ConstantSeries,
  SeriesTooShort,
  EmptyInput,
  LengthMismatch,
  ZeroActual,
  NonPositiveValue,
  TooFewObservations,
  RankDeficient,
  BadParams,
  NonStationaryParams,
  OptimizationDiverged,
  AllFitsFailed,
  ApproachInfeasible,
  NoFeasibleApproach,
  HoldoutTooShort,
  ParseError,
  GapInCalendar,
  NonPositivePrice,
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::LagTooLarge: return "LagTooLarge";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroActual: return "ZeroActual";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::TooFewObservations: return "TooFewObservations";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::NonStationaryParams: return "NonStationaryParams";
    case ErrorCode::OptimizationDiverged: return "OptimizationDiverged";
    case ErrorCode::AllFitsFailed: return "AllFitsFailed";
    case ErrorCode::ApproachInfeasible: return "ApproachInfeasible";
    case ErrorCode::NoFeasibleApproach: return "NoFeasibleApproach";
    case ErrorCode::HoldoutTooShort: return "HoldoutTooShort";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::GapInCalendar: return "GapInCalendar";
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tariffcast
