#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tariffcast/decomposition.hpp"
#include "tariffcast/error.hpp"
#include "tariffcast/forecast_result.hpp"
#include "tariffcast/metrics.hpp"
#include "tariffcast/series.hpp"

namespace tariffcast {

enum class SmoothingKind { Single, Double, HoltWinters };
enum class SmoothingObjective { Mse, Mape };

/// Smoothing constants; beta and gamma are present only for the kinds that use them.
struct SmoothingParams {
  double alpha = 0.5;
  std::optional<double> beta;
  std::optional<double> gamma;

  bool operator==(const SmoothingParams&) const = default;
};

namespace detail {

/// One-step fitted values starting at observation `offset`, plus the
/// forecast path. Empty `fitted` with `ok == false` marks a state that left
/// the admissible region (non-positive multiplicative level or index).
struct SmoothingRun {
  bool ok = true;
  std::size_t offset = 0;
  std::vector<double> fitted;
  std::vector<double> forecasts;
};

inline bool in_open_unit(double v) { return v > 0.0 && v < 1.0; }

inline SmoothingRun run_ses(std::span<const double> y, double alpha, std::size_t horizon) {
  SmoothingRun run;
  run.offset = 1;
  run.fitted.reserve(y.size() - 1);
  double f = y[0];
  for (std::size_t t = 1; t < y.size(); ++t) {
    f = alpha * y[t - 1] + (1.0 - alpha) * f;
    run.fitted.push_back(f);
  }
  const double next = alpha * y.back() + (1.0 - alpha) * f;
  run.forecasts.assign(horizon, next);
  return run;
}

inline SmoothingRun run_double(std::span<const double> y, double alpha, double beta,
                               CompositionModel variant, std::size_t horizon) {
  SmoothingRun run;
  run.offset = 2;
  const bool mult = variant == CompositionModel::Multiplicative;
  double level = y[0];
  double trend = mult ? y[1] / y[0] : y[1] - y[0];
  for (std::size_t t = 1; t < y.size(); ++t) {
    const double predicted = mult ? level * trend : level + trend;
    if (t >= 2) run.fitted.push_back(predicted);
    const double prev = level;
    level = alpha * y[t] + (1.0 - alpha) * predicted;
    if (mult) {
      if (!(level > 0.0)) return SmoothingRun{false, 2, {}, {}};
      trend = beta * (level / prev) + (1.0 - beta) * trend;
      if (!(trend > 0.0)) return SmoothingRun{false, 2, {}, {}};
    } else {
      trend = beta * (level - prev) + (1.0 - beta) * trend;
    }
  }
  run.forecasts.resize(horizon);
  for (std::size_t p = 1; p <= horizon; ++p) {
    run.forecasts[p - 1] =
        mult ? level * std::pow(trend, static_cast<double>(p)) : level + static_cast<double>(p) * trend;
  }
  return run;
}

inline SmoothingRun run_holt_winters(std::span<const double> y, std::size_t period, double alpha,
                                     double beta, double gamma, CompositionModel model,
                                     std::size_t horizon) {
  const bool mult = model == CompositionModel::Multiplicative;
  const std::size_t n = y.size();
  const std::size_t len = period;
  const double dl = static_cast<double>(len);

  double first = 0.0;
  double second = 0.0;
  for (std::size_t j = 0; j < len; ++j) {
    first += y[j];
    second += y[len + j];
  }
  first /= dl;
  second /= dl;
  double slope = (second - first) / dl;
  double level = first + slope * (dl - 1.0) / 2.0;

  // Seasonal indices for observations 0..n-1; the first season is measured
  // against the initial trend line ending at `level`.
  std::vector<double> index(n);
  double total = 0.0;
  for (std::size_t j = 0; j < len; ++j) {
    const double base = level - static_cast<double>(len - 1 - j) * slope;
    if (mult && !(base > 0.0)) return SmoothingRun{false, len, {}, {}};
    index[j] = remove(model, y[j], base);
    total += index[j];
  }
  for (std::size_t j = 0; j < len; ++j) {
    index[j] = mult ? index[j] * dl / total : index[j] - total / dl;
  }

  SmoothingRun run;
  run.offset = len;
  run.fitted.reserve(n - len);
  for (std::size_t t = len; t < n; ++t) {
    const double season = index[t - len];
    run.fitted.push_back(compose(model, level + slope, season));
    const double prev = level;
    level = alpha * remove(model, y[t], season) + (1.0 - alpha) * (prev + slope);
    if (mult && !(level > 0.0)) return SmoothingRun{false, len, {}, {}};
    slope = beta * (level - prev) + (1.0 - beta) * slope;
    index[t] = gamma * remove(model, y[t], level) + (1.0 - gamma) * season;
    if (mult && !(index[t] > 0.0)) return SmoothingRun{false, len, {}, {}};
  }
  run.forecasts.resize(horizon);
  for (std::size_t m = 1; m <= horizon; ++m) {
    const double season = index[n - len + (m - 1) % len];
    run.forecasts[m - 1] = compose(model, level + static_cast<double>(m) * slope, season);
  }
  return run;
}

inline double objective_value(std::span<const double> y, const SmoothingRun& run,
                              SmoothingObjective objective) {
  if (!run.ok) return std::numeric_limits<double>::infinity();
  const PairedSeries pairs(y.subspan(run.offset, run.fitted.size()), run.fitted);
  const double v = objective == SmoothingObjective::Mse ? mse(pairs) : mape(pairs);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

inline ForecastResult finish_smoothing(const TimeSeries& series, SmoothingRun run,
                                       std::string method, const SmoothingParams& params) {
  ForecastResult result;
  result.method = std::move(method);
  detail::finish_in_sample(result, series, run.offset, std::move(run.fitted));
  result.forecasts = std::move(run.forecasts);
  result.parameters.emplace_back("alpha", params.alpha);
  if (params.beta) result.parameters.emplace_back("beta", *params.beta);
  if (params.gamma) result.parameters.emplace_back("gamma", *params.gamma);
  return result;
}

inline void check_holt_winters(const TimeSeries& series, std::size_t period,
                               CompositionModel model) {
  check_period(period);
  if (series.size() < 2 * period) {
    throw Error(ErrorCode::SeriesTooShort, "Holt-Winters with period " + std::to_string(period) +
                                               " needs " + std::to_string(2 * period) +
                                               " observations");
  }
  if (model == CompositionModel::Multiplicative && !series.all_positive()) {
    throw Error(ErrorCode::NonPositiveValue, "multiplicative model needs positive observations");
  }
}

}  // namespace detail

/// Single exponential smoothing with F_1 = Y_1. Forecasts are flat.
[[nodiscard]] inline ForecastResult ses_forecast(const TimeSeries& series, double alpha,
                                                 std::size_t horizon) {
  detail::require_horizon(horizon);
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::BadParams, "alpha must lie in (0, 1]");
  }
  if (series.size() < 2) throw Error(ErrorCode::SeriesTooShort, "SES needs two observations");
  return detail::finish_smoothing(series, detail::run_ses(series.values(), alpha, horizon),
                                  "single exponential smoothing", SmoothingParams{alpha, {}, {}});
}

/// Double exponential smoothing. The additive variant carries an additive
/// trend; the multiplicative variant a growth ratio with F_{t+p} = C_t * T_t^p.
[[nodiscard]] inline ForecastResult double_exponential_forecast(const TimeSeries& series,
                                                                double alpha, double beta,
                                                                CompositionModel variant,
                                                                std::size_t horizon) {
  detail::require_horizon(horizon);
  if (!detail::in_open_unit(alpha) || !detail::in_open_unit(beta)) {
    throw Error(ErrorCode::BadParams, "alpha and beta must lie in (0, 1)");
  }
  if (series.size() < 3) {
    throw Error(ErrorCode::SeriesTooShort, "double smoothing needs three observations");
  }
  if (variant == CompositionModel::Multiplicative && !series.all_positive()) {
    throw Error(ErrorCode::NonPositiveValue, "multiplicative trend needs positive observations");
  }
  auto run = detail::run_double(series.values(), alpha, beta, variant, horizon);
  if (!run.ok) {
    throw Error(ErrorCode::NonPositiveValue, "multiplicative smoothing state became non-positive");
  }
  return detail::finish_smoothing(
      series, std::move(run),
      std::string("double exponential smoothing (") + to_string(variant) + " trend)",
      SmoothingParams{alpha, beta, {}});
}

/// Holt-Winters smoothing with level, additive trend and a seasonal ring of
/// length `period`.
[[nodiscard]] inline ForecastResult holt_winters_forecast(const TimeSeries& series,
                                                          std::size_t period,
                                                          const SmoothingParams& params,
                                                          CompositionModel model,
                                                          std::size_t horizon) {
  detail::require_horizon(horizon);
  if (!detail::in_open_unit(params.alpha) || !params.beta || !params.gamma ||
      !detail::in_open_unit(*params.beta) || !detail::in_open_unit(*params.gamma)) {
    throw Error(ErrorCode::BadParams, "alpha, beta and gamma must all lie in (0, 1)");
  }
  detail::check_holt_winters(series, period, model);
  auto run = detail::run_holt_winters(series.values(), period, params.alpha, *params.beta,
                                      *params.gamma, model, horizon);
  if (!run.ok) {
    throw Error(ErrorCode::NonPositiveValue, "multiplicative Holt-Winters state became non-positive");
  }
  return detail::finish_smoothing(series, std::move(run),
                                  std::string("Holt-Winters (") + to_string(model) +
                                      ", s=" + std::to_string(period) + ")",
                                  params);
}

/// Values searched for every smoothing constant: 0.05, 0.10, ..., 0.95.
[[nodiscard]] inline std::vector<double> smoothing_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(static_cast<double>(k) / 20.0);
  return grid;
}

/// Exhaustive grid search minimizing the one-step in-sample objective.
/// Grid order is lexicographic in (alpha, beta, gamma) and only strict
/// improvements replace the incumbent, so ties go to the smallest tuple.
[[nodiscard]] inline SmoothingParams optimize_smoothing_params(
    SmoothingKind kind, const TimeSeries& series, std::size_t period = 12,
    CompositionModel model = CompositionModel::Additive,
    SmoothingObjective objective = SmoothingObjective::Mse) {
  const auto y = series.values();
  const auto grid = smoothing_grid();
  double best = std::numeric_limits<double>::infinity();
  std::optional<SmoothingParams> winner;

  auto consider = [&](const detail::SmoothingRun& run, SmoothingParams candidate) {
    const double loss = detail::objective_value(y, run, objective);
    if (loss < best) {
      best = loss;
      winner = candidate;
    }
  };

  switch (kind) {
    case SmoothingKind::Single:
      if (series.size() < 2) throw Error(ErrorCode::SeriesTooShort, "SES needs two observations");
      for (double a : grid) consider(detail::run_ses(y, a, 1), {a, {}, {}});
      break;
    case SmoothingKind::Double:
      if (series.size() < 3) {
        throw Error(ErrorCode::SeriesTooShort, "double smoothing needs three observations");
      }
      if (model == CompositionModel::Multiplicative && !series.all_positive()) {
        throw Error(ErrorCode::NonPositiveValue, "multiplicative trend needs positive observations");
      }
      for (double a : grid) {
        for (double b : grid) consider(detail::run_double(y, a, b, model, 1), {a, b, {}});
      }
      break;
    case SmoothingKind::HoltWinters:
      detail::check_holt_winters(series, period, model);
      for (double a : grid) {
        for (double b : grid) {
          for (double g : grid) {
            consider(detail::run_holt_winters(y, period, a, b, g, model, 1), {a, b, g});
          }
        }
      }
      break;
  }
  if (!winner) {
    throw Error(ErrorCode::BadParams, "no grid point produced a finite in-sample error");
  }
  return *winner;
}

}  // namespace tariffcast
