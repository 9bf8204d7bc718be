#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "tariffcast/arima.hpp"
#include "tariffcast/decomposition.hpp"
#include "tariffcast/error.hpp"
#include "tariffcast/forecast_result.hpp"
#include "tariffcast/metrics.hpp"
#include "tariffcast/registry.hpp"
#include "tariffcast/regression.hpp"
#include "tariffcast/series.hpp"
#include "tariffcast/smoothing.hpp"

namespace tariffcast {

struct RunOptions {
  /// Seasonal period handed to the ARIMA order search (approach 19).
  int arima_period = 12;
  /// Worker threads for approaches and the ARIMA grid. Results do not depend on it.
  unsigned threads = 1;
};

/// Dispatches one registry approach. Any precondition failure surfaces as
/// ApproachInfeasible carrying the underlying reason.
[[nodiscard]] inline ForecastResult run_approach(int id, const TimeSeries& series,
                                                 std::size_t horizon,
                                                 const RunOptions& options = {}) {
  const ApproachDescriptor& a = approach(id);
  detail::require_horizon(horizon);
  try {
    ForecastResult result;
    switch (a.family) {
      case MethodFamily::Decomposition:
        result = forecast_decomposition(series, a.period, *a.model, *a.index_method, horizon);
        break;
      case MethodFamily::Regression:
        result = forecast_regression(series, a.period, horizon);
        break;
      case MethodFamily::SingleSmoothing: {
        const auto params = optimize_smoothing_params(SmoothingKind::Single, series);
        result = ses_forecast(series, params.alpha, horizon);
        break;
      }
      case MethodFamily::DoubleSmoothing: {
        const auto params =
            optimize_smoothing_params(SmoothingKind::Double, series, a.period, *a.model);
        result = double_exponential_forecast(series, params.alpha, *params.beta, *a.model, horizon);
        break;
      }
      case MethodFamily::HoltWinters: {
        const auto params =
            optimize_smoothing_params(SmoothingKind::HoltWinters, series, a.period, *a.model);
        result = holt_winters_forecast(series, a.period, params, *a.model, horizon);
        break;
      }
      case MethodFamily::Arima: {
        const ArimaModel model = select_arima_model(series, options.arima_period, options.threads);
        result = forecast_arima(series, model, horizon);
        break;
      }
    }
    return result;
  } catch (const Error& e) {
    throw Error(ErrorCode::ApproachInfeasible,
                "approach " + std::to_string(id) + " infeasible: " + e.what());
  }
}

/// Score used for ranking; infeasible approaches carry no triple.
struct ApproachScore {
  int id = 0;
  std::optional<ErrorTriple> errors;
};

/// Ascending by MAPE, then MAD, then MSD, then id. Approaches without a
/// finite triple follow in id order.
[[nodiscard]] inline std::vector<int> rank_approaches(std::vector<ApproachScore> scores) {
  auto usable = [](const ApproachScore& s) {
    return s.errors && std::isfinite(s.errors->mape) && std::isfinite(s.errors->mad) &&
           std::isfinite(s.errors->msd);
  };
  std::sort(scores.begin(), scores.end(), [&](const ApproachScore& l, const ApproachScore& r) {
    const bool lu = usable(l);
    const bool ru = usable(r);
    if (lu != ru) return lu;
    if (lu) {
      if (l.errors->mape != r.errors->mape) return l.errors->mape < r.errors->mape;
      if (l.errors->mad != r.errors->mad) return l.errors->mad < r.errors->mad;
      if (l.errors->msd != r.errors->msd) return l.errors->msd < r.errors->msd;
    }
    return l.id < r.id;
  });
  std::vector<int> ids;
  ids.reserve(scores.size());
  for (const auto& s : scores) ids.push_back(s.id);
  return ids;
}

struct ApproachOutcome {
  int id = 0;
  std::optional<ForecastResult> result;
  std::string failure;  // empty when result is present
};

struct TournamentReport {
  YearMonth train_start;
  YearMonth train_end;
  std::size_t horizon = 12;
  RunOptions options;
  std::vector<ApproachOutcome> outcomes;  // registry order
  std::vector<int> ranking;               // best first; infeasible last
  int winner = 0;

  [[nodiscard]] const ApproachOutcome& outcome(int id) const {
    return outcomes.at(static_cast<std::size_t>(id - 1));
  }
  [[nodiscard]] const ForecastResult& winning_result() const { return *outcome(winner).result; }
};

/// Ranking key order used by every tournament.
inline constexpr std::string_view kMetricPriority = "mape,mad,msd,id";

/// Runs all nineteen approaches and ranks them.
[[nodiscard]] inline TournamentReport run_tournament(const TimeSeries& series, std::size_t horizon,
                                                     const RunOptions& options = {}) {
  detail::require_horizon(horizon);
  TournamentReport report;
  report.train_start = series.start();
  report.train_end = series.end();
  report.horizon = horizon;
  report.options = options;
  report.outcomes.resize(kApproachCount);

  auto work = [&](std::size_t i) {
    auto& out = report.outcomes[i];
    out.id = static_cast<int>(i) + 1;
    try {
      out.result = run_approach(out.id, series, horizon, options);
    } catch (const Error& e) {
      out.failure = e.what();
    }
  };
  if (options.threads <= 1) {
    for (std::size_t i = 0; i < report.outcomes.size(); ++i) work(i);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < options.threads; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < report.outcomes.size(); i += options.threads) work(i);
      }));
    }
    for (auto& j : jobs) j.get();
  }

  std::vector<ApproachScore> scores;
  for (const auto& o : report.outcomes) {
    scores.push_back({o.id, o.result ? std::optional<ErrorTriple>(o.result->errors) : std::nullopt});
  }
  report.ranking = rank_approaches(std::move(scores));
  const auto& best = report.outcome(report.ranking.front());
  if (!best.result || !std::isfinite(best.result->errors.mape)) {
    throw Error(ErrorCode::NoFeasibleApproach, "no approach could be fitted to " +
                                                   series.start().str() + ":" + series.end().str());
  }
  report.winner = best.id;
  return report;
}

struct ValidationRow {
  YearMonth month;
  double actual = 0.0;
  double forecast = 0.0;
  double approx_error_pct = 0.0;
};

struct ValidationReport {
  int approach_id = 0;
  YearMonth train_start;
  YearMonth train_end;
  std::vector<ValidationRow> rows;
  ErrorTriple holdout_errors;
  double holdout_mpe = 0.0;
  std::optional<ForecastResult> fit;
};

/// Table of actual vs forecast with signed approximation percentage errors.
[[nodiscard]] inline ValidationReport build_validation_report(const TimeSeries& actual,
                                                              std::span<const double> forecast,
                                                              int approach_id = 0) {
  const PairedSeries pairs(actual.values(), forecast);
  const auto pct = approximation_percentage_errors(pairs);
  ValidationReport report;
  report.approach_id = approach_id;
  report.rows.reserve(actual.size());
  for (std::size_t t = 0; t < actual.size(); ++t) {
    report.rows.push_back({actual.month_at(t), actual[t], forecast[t], pct[t]});
  }
  report.holdout_errors = error_triple(pairs);
  report.holdout_mpe = mpe(pairs);
  return report;
}

/// Minimum holdout length accepted by validate_holdout.
inline constexpr std::size_t kMinHoldout = 12;

/// Fits `approach_id` on observations through `train_end` only and scores
/// the forecasts against the following `holdout_months` observations (all
/// remaining ones when not given).
[[nodiscard]] inline ValidationReport validate_holdout(const TimeSeries& series, YearMonth train_end,
                                                       int approach_id,
                                                       std::optional<std::size_t> holdout_months = {},
                                                       const RunOptions& options = {}) {
  const long after = train_end.months_until(series.end());
  if (train_end < series.start() || after < 0) {
    throw Error(ErrorCode::InvalidArgument, "training end " + train_end.str() +
                                                " lies outside the series");
  }
  const std::size_t available = static_cast<std::size_t>(after);
  const std::size_t length = holdout_months.value_or(available);
  if (length < kMinHoldout || length > available) {
    throw Error(ErrorCode::HoldoutTooShort,
                "holdout needs at least " + std::to_string(kMinHoldout) + " observations after " +
                    train_end.str() + "; requested " + std::to_string(length) + ", available " +
                    std::to_string(available));
  }
  const TimeSeries train = series.slice(series.start(), train_end);
  const TimeSeries holdout = series.slice(train_end.plus(1), train_end.plus(static_cast<long>(length)));
  ForecastResult fit = run_approach(approach_id, train, length, options);
  ValidationReport report = build_validation_report(holdout, fit.forecasts, approach_id);
  report.train_start = train.start();
  report.train_end = train.end();
  report.fit = std::move(fit);
  return report;
}

struct TrainingWindow {
  YearMonth start;
  YearMonth end;

  bool operator==(const TrainingWindow&) const = default;
};

struct WindowResult {
  TrainingWindow window;
  TournamentReport tournament;
  ValidationReport validation;
};

struct WindowComparison {
  std::size_t holdout_months = 0;
  WindowResult a;
  WindowResult b;
};

/// Runs a tournament on each training window, validates each winner on the
/// shared holdout that follows both windows.
[[nodiscard]] inline WindowComparison compare_windows(const TimeSeries& series,
                                                      const TrainingWindow& window_a,
                                                      const TrainingWindow& window_b,
                                                      std::size_t holdout_months,
                                                      const RunOptions& options = {}) {
  if (!(window_a.end == window_b.end)) {
    throw Error(ErrorCode::InvalidArgument, "training windows must end in the same month");
  }
  WindowComparison cmp;
  cmp.holdout_months = holdout_months;
  auto evaluate = [&](const TrainingWindow& w) {
    const TimeSeries train = series.slice(w.start, w.end);
    TournamentReport t = run_tournament(train, holdout_months, options);
    const TimeSeries tail = series.slice(w.start, series.end());
    ValidationReport v = validate_holdout(tail, w.end, t.winner, holdout_months, options);
    return WindowResult{w, std::move(t), std::move(v)};
  };
  cmp.a = evaluate(window_a);
  cmp.b = evaluate(window_b);
  return cmp;
}

}  // namespace tariffcast
