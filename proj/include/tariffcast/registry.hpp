#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "tariffcast/decomposition.hpp"
#include "tariffcast/error.hpp"

namespace tariffcast {

enum class MethodFamily {
  Decomposition,
  Regression,
  SingleSmoothing,
  DoubleSmoothing,
  HoltWinters,
  Arima,
};

[[nodiscard]] constexpr std::string_view to_string(MethodFamily f) noexcept {
  switch (f) {
    case MethodFamily::Decomposition: return "classical_decomposition";
    case MethodFamily::Regression: return "regression";
    case MethodFamily::SingleSmoothing: return "single_exponential_smoothing";
    case MethodFamily::DoubleSmoothing: return "double_exponential_smoothing";
    case MethodFamily::HoltWinters: return "holt_winters";
    case MethodFamily::Arima: return "arima";
  }
  return "unknown";
}

/// One of the nineteen forecasting approaches.
struct ApproachDescriptor {
  int id;
  MethodFamily family;
  std::optional<CompositionModel> model;
  std::optional<IndexMethod> index_method;
  std::size_t period;  // 0 for ARIMA, whose period comes from the run options
  std::string_view description;
};

inline constexpr std::string_view kRegistryVersion = "tariff-approaches/1";
inline constexpr int kApproachCount = 19;

inline constexpr std::array<ApproachDescriptor, kApproachCount> kApproaches{{
    {1, MethodFamily::Decomposition, CompositionModel::Multiplicative, IndexMethod::Standard, 12,
     "Classical decomposition with multiplicative model with seasonality is 12"},
    {2, MethodFamily::Decomposition, CompositionModel::Multiplicative, IndexMethod::Standard, 4,
     "Classical decomposition with multiplicative model with seasonality is 4"},
    {3, MethodFamily::Decomposition, CompositionModel::Additive, IndexMethod::Standard, 12,
     "Classical decomposition with additive model with seasonality is 12"},
    {4, MethodFamily::Decomposition, CompositionModel::Additive, IndexMethod::Standard, 4,
     "Classical decomposition with additive model with seasonality is 4"},
    {5, MethodFamily::Decomposition, CompositionModel::Multiplicative,
     IndexMethod::CenteredMovingAverage, 12,
     "Classical decomposition with centering moving averages with multiplicative model with "
     "seasonality is 12"},
    {6, MethodFamily::Decomposition, CompositionModel::Multiplicative,
     IndexMethod::CenteredMovingAverage, 4,
     "Classical decomposition with centering moving averages with multiplicative model with "
     "seasonality is 4"},
    {7, MethodFamily::Decomposition, CompositionModel::Additive, IndexMethod::CenteredMovingAverage,
     12,
     "Classical decomposition with centering moving averages with additive model with "
     "seasonality is 12"},
    {8, MethodFamily::Decomposition, CompositionModel::Additive, IndexMethod::CenteredMovingAverage,
     4,
     "Classical decomposition with centering moving averages with additive model with "
     "seasonality is 4"},
    {9, MethodFamily::Regression, std::nullopt, std::nullopt, 12,
     "Forecasting with regression equation with seasonality is 12"},
    {10, MethodFamily::Regression, std::nullopt, std::nullopt, 4,
     "Forecasting with regression equation with seasonality is 4"},
    {11, MethodFamily::SingleSmoothing, std::nullopt, std::nullopt, 12,
     "Single exponential smoothing with seasonality is 12"},
    {12, MethodFamily::SingleSmoothing, std::nullopt, std::nullopt, 4,
     "Single exponential smoothing with seasonality is 4"},
    {13, MethodFamily::DoubleSmoothing, CompositionModel::Multiplicative, std::nullopt, 12,
     "Double exponential smoothing with seasonality is 12 with multiplicative model"},
    {14, MethodFamily::DoubleSmoothing, CompositionModel::Additive, std::nullopt, 12,
     "Double exponential smoothing with additive model with seasonality is 12"},
    {15, MethodFamily::DoubleSmoothing, CompositionModel::Multiplicative, std::nullopt, 4,
     "Double exponential smoothing with multiplicative model with seasonality is 4"},
    {16, MethodFamily::DoubleSmoothing, CompositionModel::Additive, std::nullopt, 4,
     "Double exponential smoothing with additive model with seasonality is 4"},
    {17, MethodFamily::HoltWinters, CompositionModel::Multiplicative, std::nullopt, 12,
     "Holt Winter's model with ideal coefficients with seasonality is 12"},
    {18, MethodFamily::HoltWinters, CompositionModel::Multiplicative, std::nullopt, 4,
     "Holt Winter's model with ideal coefficients with seasonality is 4"},
    {19, MethodFamily::Arima, std::nullopt, std::nullopt, 0, "ARIMA models"},
}};

[[nodiscard]] inline const ApproachDescriptor& approach(int id) {
  if (id < 1 || id > kApproachCount) {
    throw Error(ErrorCode::InvalidArgument, "approach id must lie in 1..19, got " + std::to_string(id));
  }
  return kApproaches[static_cast<std::size_t>(id - 1)];
}

}  // namespace tariffcast
