#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tariffcast/error.hpp"
#include "tariffcast/forecast_result.hpp"
#include "tariffcast/series.hpp"

namespace tariffcast {

enum class CompositionModel { Additive, Multiplicative };
enum class IndexMethod { Standard, CenteredMovingAverage };

[[nodiscard]] constexpr const char* to_string(CompositionModel m) noexcept {
  return m == CompositionModel::Additive ? "additive" : "multiplicative";
}

/// Straight line intercept + slope * t over 1-based observation positions.
struct TrendLine {
  double intercept = 0.0;
  double slope = 0.0;

  [[nodiscard]] double at(double t) const noexcept { return intercept + slope * t; }
};

/// Least-squares line through (t, y_t) for t = 1..n.
[[nodiscard]] inline TrendLine fit_trend_line(std::span<const double> y) {
  const std::size_t n = y.size();
  if (n < 2) throw Error(ErrorCode::SeriesTooShort, "trend line needs two points");
  const double dn = static_cast<double>(n);
  const double t_mean = (dn + 1.0) / 2.0;
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= dn;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = static_cast<double>(i + 1) - t_mean;
    sxy += dt * (y[i] - y_mean);
    sxx += dt * dt;
  }
  const double slope = sxy / sxx;
  return TrendLine{y_mean - slope * t_mean, slope};
}

/// Per-season indices keyed by season position (see season_of).
struct SeasonalIndexSet {
  std::size_t period = 12;
  CompositionModel model = CompositionModel::Multiplicative;
  std::vector<double> indices;

  [[nodiscard]] double at(const YearMonth& when) const { return indices[season_of(when, period)]; }

  /// Neutral element of the composition (1 or 0).
  [[nodiscard]] double identity() const noexcept {
    return model == CompositionModel::Multiplicative ? 1.0 : 0.0;
  }
};

/// Trend, seasonal indices and irregular remainder of a series.
struct DecompositionFit {
  SeasonalIndexSet indices;
  TrendLine trend;
  std::vector<double> irregular;
};

namespace detail {

inline void check_period(std::size_t period) {
  if (period != 4 && period != 12) {
    throw Error(ErrorCode::InvalidArgument, "seasonal period must be 4 or 12");
  }
}

inline void check_decomposable(const TimeSeries& series, std::size_t period,
                               CompositionModel model) {
  check_period(period);
  if (series.size() < 2 * period) {
    throw Error(ErrorCode::SeriesTooShort, "decomposition with period " + std::to_string(period) +
                                               " needs " + std::to_string(2 * period) +
                                               " observations, got " +
                                               std::to_string(series.size()));
  }
  if (model == CompositionModel::Multiplicative && !series.all_positive()) {
    throw Error(ErrorCode::NonPositiveValue, "multiplicative model needs positive observations");
  }
}

inline double compose(CompositionModel model, double trend, double index) {
  return model == CompositionModel::Multiplicative ? trend * index : trend + index;
}

inline double remove(CompositionModel model, double value, double component) {
  return model == CompositionModel::Multiplicative ? value / component : value - component;
}

/// Averages per-season ratios/differences and normalizes to mean 1 or 0.
inline SeasonalIndexSet average_by_season(const TimeSeries& series, std::size_t first,
                                          std::span<const double> detrended, std::size_t period,
                                          CompositionModel model) {
  std::vector<double> sum(period, 0.0);
  std::vector<std::size_t> count(period, 0);
  for (std::size_t i = 0; i < detrended.size(); ++i) {
    const std::size_t s = series.season(first + i, period);
    sum[s] += detrended[i];
    ++count[s];
  }
  SeasonalIndexSet out{period, model, std::vector<double>(period)};
  for (std::size_t s = 0; s < period; ++s) {
    if (count[s] == 0) {
      throw Error(ErrorCode::SeriesTooShort, "no observation for season " + std::to_string(s));
    }
    out.indices[s] = sum[s] / static_cast<double>(count[s]);
  }
  double total = 0.0;
  for (double v : out.indices) total += v;
  if (model == CompositionModel::Multiplicative) {
    const double scale = static_cast<double>(period) / total;
    for (double& v : out.indices) {
      v *= scale;
      if (!(v > 0.0)) {
        throw Error(ErrorCode::NonPositiveValue, "multiplicative seasonal index is not positive");
      }
    }
  } else {
    const double shift = total / static_cast<double>(period);
    for (double& v : out.indices) v -= shift;
  }
  return out;
}

}  // namespace detail

/// Seasonal indices against a least-squares line through the raw series:
/// mean detrended value per season, normalized.
[[nodiscard]] inline SeasonalIndexSet seasonal_indices_standard(const TimeSeries& series,
                                                                std::size_t period,
                                                                CompositionModel model) {
  detail::check_decomposable(series, period, model);
  const TrendLine line = fit_trend_line(series.values());
  std::vector<double> detrended(series.size());
  for (std::size_t t = 0; t < series.size(); ++t) {
    const double trend = line.at(static_cast<double>(t + 1));
    if (model == CompositionModel::Multiplicative && !(trend > 0.0)) {
      throw Error(ErrorCode::NonPositiveValue, "trend line is not positive at " +
                                                   series.month_at(t).str());
    }
    detrended[t] = detail::remove(model, series[t], trend);
  }
  return detail::average_by_season(series, 0, detrended, period, model);
}

/// Ratio-to-moving-average indices (difference-to-moving-average for the
/// additive model) using a centered moving average of one full period.
[[nodiscard]] inline SeasonalIndexSet seasonal_indices_cma(const TimeSeries& series,
                                                           std::size_t period,
                                                           CompositionModel model) {
  detail::check_decomposable(series, period, model);
  const TimeSeries cma = centered_moving_average(series, period);
  const auto first = static_cast<std::size_t>(series.start().months_until(cma.start()));
  std::vector<double> detrended(cma.size());
  for (std::size_t i = 0; i < cma.size(); ++i) {
    detrended[i] = detail::remove(model, series[first + i], cma[i]);
  }
  return detail::average_by_season(series, first, detrended, period, model);
}

[[nodiscard]] inline SeasonalIndexSet seasonal_indices(const TimeSeries& series, std::size_t period,
                                                       CompositionModel model, IndexMethod method) {
  return method == IndexMethod::Standard ? seasonal_indices_standard(series, period, model)
                                         : seasonal_indices_cma(series, period, model);
}

/// Indices, a trend line refitted to the deseasonalized series, and the
/// irregular remainder.
[[nodiscard]] inline DecompositionFit decompose(const TimeSeries& series, std::size_t period,
                                                CompositionModel model, IndexMethod method) {
  DecompositionFit fit{seasonal_indices(series, period, model, method), {}, {}};
  const std::size_t n = series.size();
  std::vector<double> deseasonalized(n);
  for (std::size_t t = 0; t < n; ++t) {
    deseasonalized[t] = detail::remove(model, series[t], fit.indices.at(series.month_at(t)));
  }
  fit.trend = fit_trend_line(deseasonalized);
  fit.irregular.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double ts = detail::compose(model, fit.trend.at(static_cast<double>(t + 1)),
                                      fit.indices.at(series.month_at(t)));
    fit.irregular[t] = detail::remove(model, series[t], ts);
  }
  return fit;
}

/// Classical decomposition forecast: project the deseasonalized trend and
/// re-apply each target month's seasonal index.
[[nodiscard]] inline ForecastResult forecast_decomposition(const TimeSeries& series,
                                                           std::size_t period,
                                                           CompositionModel model,
                                                           IndexMethod method,
                                                           std::size_t horizon) {
  detail::require_horizon(horizon);
  const DecompositionFit fit = decompose(series, period, model, method);
  const std::size_t n = series.size();

  ForecastResult result;
  result.method = std::string("classical decomposition (") +
                  (method == IndexMethod::Standard ? "standard" : "centered moving average") +
                  ", " + to_string(model) + ", s=" + std::to_string(period) + ")";
  std::vector<double> fitted(n);
  for (std::size_t t = 0; t < n; ++t) {
    fitted[t] = detail::compose(model, fit.trend.at(static_cast<double>(t + 1)),
                                fit.indices.at(series.month_at(t)));
  }
  detail::finish_in_sample(result, series, 0, std::move(fitted));

  result.forecasts.resize(horizon);
  for (std::size_t h = 0; h < horizon; ++h) {
    const double t = static_cast<double>(n + h + 1);
    result.forecasts[h] =
        detail::compose(model, fit.trend.at(t), fit.indices.at(series.month_at(n + h)));
  }
  result.parameters.emplace_back("trend_intercept", fit.trend.intercept);
  result.parameters.emplace_back("trend_slope", fit.trend.slope);
  for (std::size_t s = 0; s < period; ++s) {
    result.parameters.emplace_back("index_" + std::to_string(s), fit.indices.indices[s]);
  }
  return result;
}

}  // namespace tariffcast
