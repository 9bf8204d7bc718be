#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tariffcast/metrics.hpp"
#include "tariffcast/series.hpp"

namespace tariffcast {

/// Output of every forecasting approach.
///
/// `fitted` and `residuals` cover observations [fitted_offset, n) of the
/// series the model was fitted on; residual = actual - fitted. `forecasts`
/// start the month after the last observation. `errors` are computed on the
/// in-sample one-step fitted values.
struct ForecastResult {
  std::string method;
  std::size_t fitted_offset = 0;
  std::vector<double> fitted;
  std::vector<double> residuals;
  YearMonth forecast_start;
  std::vector<double> forecasts;
  ErrorTriple errors;
  std::vector<std::pair<std::string, double>> parameters;

  [[nodiscard]] YearMonth forecast_month(std::size_t h) const {
    return forecast_start.plus(static_cast<long>(h));
  }
};

namespace detail {

/// Fills fitted/residual/error fields from in-sample fitted values that
/// start at observation `offset`.
inline void finish_in_sample(ForecastResult& result, const TimeSeries& series,
                             std::size_t offset, std::vector<double> fitted) {
  const auto actual = series.values().subspan(offset, fitted.size());
  result.fitted_offset = offset;
  result.residuals.resize(fitted.size());
  for (std::size_t i = 0; i < fitted.size(); ++i) result.residuals[i] = actual[i] - fitted[i];
  result.fitted = std::move(fitted);
  result.errors = error_triple(PairedSeries(actual, result.fitted));
  result.forecast_start = series.end().plus(1);
}

inline void require_horizon(std::size_t horizon) {
  if (horizon == 0) throw Error(ErrorCode::InvalidArgument, "horizon must be at least 1");
}

}  // namespace detail

}  // namespace tariffcast
