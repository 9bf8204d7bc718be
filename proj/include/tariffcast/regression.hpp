#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tariffcast/decomposition.hpp"
#include "tariffcast/error.hpp"
#include "tariffcast/forecast_result.hpp"
#include "tariffcast/series.hpp"

namespace tariffcast {

/// y_t = C0 + T0 * t + sum_{j=2..s} beta_j * D_{j,t}; season 1 is the baseline.
struct RegressionModel {
  double intercept = 0.0;
  double trend = 0.0;
  std::vector<double> dummies;  // beta_2..beta_s
  std::size_t period = 12;

  /// Prediction at 1-based position t with 1-based season number.
  [[nodiscard]] double predict(double t, std::size_t season) const {
    const double seasonal = season >= 2 ? dummies[season - 2] : 0.0;
    return intercept + trend * t + seasonal;
  }
};

/// Ones, trend t = 1..n, then 0/1 indicators for seasons 2..period. The
/// season of row t is (anchor_season + t - 1) mod period, reported 1-based.
[[nodiscard]] inline Eigen::MatrixXd build_design_matrix(std::size_t n, std::size_t period,
                                                         std::size_t anchor_season) {
  detail::check_period(period);
  if (anchor_season < 1 || anchor_season > period) {
    throw Error(ErrorCode::InvalidArgument, "anchor season must lie in 1..period");
  }
  if (n < period + 2) {
    throw Error(ErrorCode::TooFewObservations,
                std::to_string(n) + " observations for " + std::to_string(period + 1) +
                    " regression coefficients");
  }
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(period + 1));
  for (std::size_t row = 0; row < n; ++row) {
    const auto r = static_cast<Eigen::Index>(row);
    x(r, 0) = 1.0;
    x(r, 1) = static_cast<double>(row + 1);
    const std::size_t season = (anchor_season - 1 + row) % period + 1;
    if (season >= 2) x(r, static_cast<Eigen::Index>(season)) = 1.0;
  }
  return x;
}

/// Least-squares coefficients via column-pivoted Householder QR.
[[nodiscard]] inline Eigen::VectorXd fit_least_squares(const Eigen::MatrixXd& x,
                                                       const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "design rows and observation count differ");
  }
  if (x.rows() < x.cols()) {
    throw Error(ErrorCode::TooFewObservations, "fewer rows than columns");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < x.cols()) {
    throw Error(ErrorCode::RankDeficient, "design matrix has rank " + std::to_string(qr.rank()) +
                                              " < " + std::to_string(x.cols()) + " columns");
  }
  return qr.solve(y);
}

/// Largest |X_j' r| / (|X_j| |y|) over the columns of x.
[[nodiscard]] inline double max_normalized_orthogonality(const Eigen::MatrixXd& x,
                                                         const Eigen::VectorXd& y,
                                                         const Eigen::VectorXd& beta) {
  const Eigen::VectorXd r = y - x * beta;
  const double ynorm = std::max(y.norm(), 1e-300);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double cn = std::max(x.col(j).norm(), 1e-300);
    worst = std::max(worst, std::abs(x.col(j).dot(r)) / (cn * ynorm));
  }
  return worst;
}

/// 1-based season number of observation t (0-based) of a series.
[[nodiscard]] inline std::size_t regression_season(const TimeSeries& series, std::size_t t,
                                                   std::size_t period) {
  return series.season(t, period) + 1;
}

[[nodiscard]] inline RegressionModel fit_regression(const TimeSeries& series, std::size_t period) {
  const Eigen::MatrixXd x =
      build_design_matrix(series.size(), period, regression_season(series, 0, period));
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(series.values().data(),
                                        static_cast<Eigen::Index>(series.size()));
  const Eigen::VectorXd beta = fit_least_squares(x, y);
  RegressionModel model;
  model.period = period;
  model.intercept = beta(0);
  model.trend = beta(1);
  model.dummies.assign(beta.data() + 2, beta.data() + beta.size());
  return model;
}

/// Trend plus seasonal-dummy regression forecast.
[[nodiscard]] inline ForecastResult forecast_regression(const TimeSeries& series,
                                                        std::size_t period, std::size_t horizon) {
  detail::require_horizon(horizon);
  const RegressionModel model = fit_regression(series, period);
  const std::size_t n = series.size();

  ForecastResult result;
  result.method = "seasonal dummy regression (s=" + std::to_string(period) + ")";
  std::vector<double> fitted(n);
  for (std::size_t t = 0; t < n; ++t) {
    fitted[t] = model.predict(static_cast<double>(t + 1), regression_season(series, t, period));
  }
  detail::finish_in_sample(result, series, 0, std::move(fitted));
  result.forecasts.resize(horizon);
  for (std::size_t h = 0; h < horizon; ++h) {
    result.forecasts[h] = model.predict(static_cast<double>(n + h + 1),
                                        regression_season(series, n + h, period));
  }
  result.parameters.emplace_back("intercept", model.intercept);
  result.parameters.emplace_back("trend", model.trend);
  for (std::size_t j = 0; j < model.dummies.size(); ++j) {
    result.parameters.emplace_back("season_" + std::to_string(j + 2), model.dummies[j]);
  }
  return result;
}

}  // namespace tariffcast
