#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "tariffcast/error.hpp"
#include "tariffcast/forecast_result.hpp"
#include "tariffcast/series.hpp"

namespace tariffcast {

/// (p,d,q)(P,D,Q)_s.
struct ArimaOrder {
  int p = 0;
  int d = 0;
  int q = 0;
  int P = 0;
  int D = 0;
  int Q = 0;
  int s = 12;

  [[nodiscard]] int coefficient_count() const noexcept { return p + q + P + Q; }
  /// Lags consumed by the AR side; residuals start after them.
  [[nodiscard]] int ar_span() const noexcept { return p + s * P; }
  [[nodiscard]] int differencing_span() const noexcept { return d + s * D; }
  [[nodiscard]] bool includes_mean() const noexcept { return d + D == 0; }

  [[nodiscard]] auto tuple() const noexcept { return std::tie(p, d, q, P, D, Q, s); }
  bool operator==(const ArimaOrder&) const = default;

  [[nodiscard]] std::string str() const {
    return "(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")(" +
           std::to_string(P) + "," + std::to_string(D) + "," + std::to_string(Q) + ")_" +
           std::to_string(s);
  }

  void validate() const {
    if (p < 0 || d < 0 || q < 0 || P < 0 || D < 0 || Q < 0) {
      throw Error(ErrorCode::InvalidArgument, "ARIMA orders must be non-negative");
    }
    if (d + D > 2) throw Error(ErrorCode::InvalidArgument, "total differencing d + D must be <= 2");
    if ((P > 0 || D > 0 || Q > 0) && s < 2) {
      throw Error(ErrorCode::InvalidArgument, "seasonal terms need a period s >= 2");
    }
    if (s < 1) throw Error(ErrorCode::InvalidArgument, "seasonal period must be positive");
  }
};

/// Fitted seasonal ARIMA. MA coefficients use the (1 - w_1 B - ...) sign
/// convention: x_t = e_t - w_1 e_{t-1} - ... on the AR-filtered, demeaned
/// differenced series.
struct ArimaModel {
  ArimaOrder order;
  std::vector<double> ar;   // phi_1..phi_p
  std::vector<double> ma;   // omega_1..omega_q
  std::vector<double> sar;  // seasonal phi
  std::vector<double> sma;  // seasonal omega
  double mean = 0.0;        // mu of the differenced series; 0 unless d + D == 0
  double sigma2 = 0.0;
  double css = 0.0;
  std::size_t effective_observations = 0;

  /// Phi_0 = mu * (1 - sum of the expanded AR coefficients).
  [[nodiscard]] double constant() const;

  [[nodiscard]] int free_parameter_count() const noexcept {
    return order.coefficient_count() + (order.includes_mean() ? 1 : 0);
  }

  /// n_eff * ln(sigma2) + 2 * free parameters.
  [[nodiscard]] double aic() const {
    return static_cast<double>(effective_observations) * std::log(sigma2) +
           2.0 * static_cast<double>(free_parameter_count());
  }

  /// A zero-coefficient model of the given order.
  [[nodiscard]] static ArimaModel zero(const ArimaOrder& order) {
    ArimaModel m;
    m.order = order;
    m.ar.assign(static_cast<std::size_t>(order.p), 0.0);
    m.ma.assign(static_cast<std::size_t>(order.q), 0.0);
    m.sar.assign(static_cast<std::size_t>(order.P), 0.0);
    m.sma.assign(static_cast<std::size_t>(order.Q), 0.0);
    return m;
  }
};

namespace detail {

/// Lag polynomial 1 - sum c_k B^k stored as c_1..c_K.
inline std::vector<double> expand_lag_product(std::span<const double> regular,
                                              std::span<const double> seasonal, int s) {
  // Coefficients of the full polynomial, index = lag, [0] = 1.
  std::vector<double> a(regular.size() + 1, 0.0);
  a[0] = 1.0;
  for (std::size_t i = 0; i < regular.size(); ++i) a[i + 1] = -regular[i];
  std::vector<double> b(seasonal.size() * static_cast<std::size_t>(s) + 1, 0.0);
  b[0] = 1.0;
  for (std::size_t j = 0; j < seasonal.size(); ++j) b[(j + 1) * static_cast<std::size_t>(s)] = -seasonal[j];
  std::vector<double> prod(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] += a[i] * b[j];
  }
  std::vector<double> c(prod.size() - 1);
  for (std::size_t k = 1; k < prod.size(); ++k) c[k - 1] = -prod[k];
  return c;
}

/// Coefficients of (1 - B)^d (1 - B^s)^D as delta_1..delta_K with
/// y_t = w_t + sum delta_k y_{t-k}.
inline std::vector<double> integration_weights(int d, int D, int s) {
  std::vector<double> poly{1.0};
  auto multiply = [&poly](std::size_t lag) {
    std::vector<double> next(poly.size() + lag, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + lag] -= poly[i];
    }
    poly = std::move(next);
  };
  for (int i = 0; i < d; ++i) multiply(1);
  for (int i = 0; i < D; ++i) multiply(static_cast<std::size_t>(s));
  std::vector<double> delta(poly.size() - 1);
  for (std::size_t k = 1; k < poly.size(); ++k) delta[k - 1] = -poly[k];
  return delta;
}

inline std::vector<double> apply_differencing(std::span<const double> y, const ArimaOrder& order) {
  const auto delta = integration_weights(order.d, order.D, order.s);
  const std::size_t span = delta.size();
  if (y.size() <= span) return {};
  std::vector<double> w(y.size() - span);
  for (std::size_t t = span; t < y.size(); ++t) {
    double v = y[t];
    for (std::size_t k = 1; k <= span; ++k) v -= delta[k - 1] * y[t - k];
    w[t - span] = v;
  }
  return w;
}

/// Mean of the differenced series used as mu when the model carries one.
inline double differenced_mean(std::span<const double> w) {
  if (w.empty()) return 0.0;
  return std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
}

}  // namespace detail

/// True when all roots of 1 - c_1 z - ... - c_k z^k lie outside the unit
/// circle, decided by the step-down (reverse Levinson) recursion.
[[nodiscard]] inline bool is_stationary(std::span<const double> coeffs) {
  std::vector<double> a(coeffs.begin(), coeffs.end());
  while (!a.empty() && a.back() == 0.0) a.pop_back();
  for (std::size_t k = a.size(); k >= 1; --k) {
    const double r = a[k - 1];
    if (!(std::abs(r) < 1.0)) return false;
    const double denom = 1.0 - r * r;
    std::vector<double> next(k - 1);
    for (std::size_t j = 1; j < k; ++j) next[j - 1] = (a[j - 1] + r * a[k - j - 1]) / denom;
    a = std::move(next);
  }
  return true;
}

[[nodiscard]] inline bool is_admissible(const ArimaModel& model) {
  return is_stationary(model.ar) && is_stationary(model.sar) && is_stationary(model.ma) &&
         is_stationary(model.sma);
}

inline double ArimaModel::constant() const {
  const auto c = detail::expand_lag_product(ar, sar, order.s);
  return mean * (1.0 - std::accumulate(c.begin(), c.end(), 0.0));
}

namespace detail {

/// Conditional residuals over the whole differenced series: entries before
/// the AR span are zero and serve as the pre-sample errors.
inline std::vector<double> conditional_errors(std::span<const double> w, const ArimaModel& model) {
  const auto ar = expand_lag_product(model.ar, model.sar, model.order.s);
  const auto ma = expand_lag_product(model.ma, model.sma, model.order.s);
  const std::size_t start = static_cast<std::size_t>(model.order.ar_span());
  std::vector<double> e(w.size(), 0.0);
  for (std::size_t t = start; t < w.size(); ++t) {
    double v = w[t] - model.mean;
    for (std::size_t k = 1; k <= ar.size(); ++k) v -= ar[k - 1] * (w[t - k] - model.mean);
    for (std::size_t k = 1; k <= ma.size() && k <= t; ++k) v += ma[k - 1] * e[t - k];
    e[t] = v;
  }
  return e;
}

inline double sum_of_squares(std::span<const double> w, const ArimaModel& model) {
  const auto e = conditional_errors(w, model);
  double s = 0.0;
  for (std::size_t t = static_cast<std::size_t>(model.order.ar_span()); t < e.size(); ++t) {
    s += e[t] * e[t];
  }
  return s;
}

inline std::vector<double*> coefficient_slots(ArimaModel& m) {
  std::vector<double*> slots;
  for (auto* v : {&m.ar, &m.ma, &m.sar, &m.sma}) {
    for (double& c : *v) slots.push_back(&c);
  }
  return slots;
}

inline std::vector<double> differenced_or_throw(const TimeSeries& series, const ArimaOrder& order) {
  auto w = apply_differencing(series.values(), order);
  if (w.size() <= static_cast<std::size_t>(order.ar_span())) {
    throw Error(ErrorCode::SeriesTooShort, "series too short for ARIMA" + order.str());
  }
  return w;
}

}  // namespace detail

/// Conditional-sum-of-squares residuals: difference the series, then run the
/// ARMA recursion conditioned on the first p + s*P differenced observations
/// with pre-sample errors set to zero.
[[nodiscard]] inline std::vector<double> css_residuals(const TimeSeries& series,
                                                       const ArimaModel& model) {
  model.order.validate();
  if (!is_admissible(model)) {
    throw Error(ErrorCode::NonStationaryParams,
                "coefficients violate stationarity or invertibility");
  }
  const auto w = detail::differenced_or_throw(series, model.order);
  auto e = detail::conditional_errors(w, model);
  e.erase(e.begin(), e.begin() + model.order.ar_span());
  return e;
}

/// Coefficient bound used by the estimator.
inline constexpr double kArimaCoefficientBound = 0.99;

namespace detail {

/// Cyclic coordinate search: step 0.1, halved until below 1e-6, each
/// coefficient kept inside the bound and the model kept admissible. Only
/// strict improvements are accepted.
inline double coordinate_descent(std::span<const double> w, ArimaModel& model, double best) {
  auto slots = coefficient_slots(model);
  for (double step = 0.1; step >= 1e-6; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (double* slot : slots) {
        for (double direction : {1.0, -1.0}) {
          const double old = *slot;
          const double trial = old + direction * step;
          if (std::abs(trial) >= kArimaCoefficientBound) continue;
          *slot = trial;
          if (is_admissible(model)) {
            const double loss = sum_of_squares(w, model);
            if (loss < best) {
              best = loss;
              improved = true;
              break;
            }
          }
          *slot = old;
        }
      }
    }
  }
  return best;
}

/// Per-coefficient lattice used to seed the search. Finer for small models.
inline std::vector<double> seed_lattice(int coefficients) {
  const int half = coefficients <= 2 ? 19 : coefficients == 3 ? 4 : coefficients == 4 ? 2 : 1;
  const double step = coefficients <= 2 ? 0.05 : coefficients == 3 ? 0.2 : coefficients == 4 ? 0.4 : 0.5;
  std::vector<double> values;
  for (int i = -half; i <= half; ++i) values.push_back(static_cast<double>(i) * step);
  return values;
}

/// Admissible lattice point with the smallest sum of squares, scanned in
/// lexicographic order with strict improvement.
inline double best_lattice_point(std::span<const double> w, ArimaModel& model) {
  auto slots = coefficient_slots(model);
  const auto values = seed_lattice(static_cast<int>(slots.size()));
  std::vector<std::size_t> idx(slots.size(), 0);
  std::vector<double> best_point(slots.size(), 0.0);
  for (double* slot : slots) *slot = 0.0;
  double best = sum_of_squares(w, model);
  if (slots.empty()) return best;
  while (true) {
    for (std::size_t i = 0; i < slots.size(); ++i) *slots[i] = values[idx[i]];
    if (is_admissible(model)) {
      const double loss = sum_of_squares(w, model);
      if (loss < best) {
        best = loss;
        for (std::size_t i = 0; i < slots.size(); ++i) best_point[i] = *slots[i];
      }
    }
    std::size_t pos = slots.size();
    while (pos > 0 && ++idx[pos - 1] == values.size()) idx[--pos] = 0;
    if (pos == 0) break;
  }
  for (std::size_t i = 0; i < slots.size(); ++i) *slots[i] = best_point[i];
  return best;
}

}  // namespace detail

/// CSS estimation. The coordinate search runs twice, once from zero and once
/// from the best point of a coefficient lattice, and the lower sum of squares
/// is kept.
[[nodiscard]] inline ArimaModel fit_arima(const TimeSeries& series, const ArimaOrder& order) {
  order.validate();
  const long n_diff = static_cast<long>(series.size()) - order.differencing_span();
  const int k = order.coefficient_count();
  if (n_diff <= 3L * k + 5) {
    throw Error(ErrorCode::SeriesTooShort, "ARIMA" + order.str() + " needs more than " +
                                               std::to_string(3 * k + 5) +
                                               " differenced observations");
  }
  const auto w = detail::differenced_or_throw(series, order);
  const std::size_t n_eff = w.size() - static_cast<std::size_t>(order.ar_span());
  if (n_eff <= static_cast<std::size_t>(k) + 1) {
    throw Error(ErrorCode::SeriesTooShort, "too few residuals for ARIMA" + order.str());
  }

  ArimaModel model = ArimaModel::zero(order);
  model.mean = order.includes_mean() ? detail::differenced_mean(w) : 0.0;
  const double initial = detail::sum_of_squares(w, model);
  if (!std::isfinite(initial)) {
    throw Error(ErrorCode::OptimizationDiverged, "initial sum of squares is not finite");
  }
  double best = detail::coordinate_descent(w, model, initial);

  if (k > 0) {
    ArimaModel seeded = ArimaModel::zero(order);
    seeded.mean = model.mean;
    const double seed = detail::best_lattice_point(w, seeded);
    const double refined = detail::coordinate_descent(w, seeded, seed);
    if (refined < best) {
      best = refined;
      model = std::move(seeded);
    }
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorCode::OptimizationDiverged, "sum of squares is not finite");
  }
  model.css = best;
  model.effective_observations = n_eff;
  model.sigma2 = std::max(best / static_cast<double>(n_eff), std::numeric_limits<double>::min());
  return model;
}

/// The 72 candidate orders searched by select_arima_order, in lexicographic
/// (p, d, q, P, D, Q) order.
[[nodiscard]] inline std::vector<ArimaOrder> arima_order_grid(int s) {
  std::vector<ArimaOrder> grid;
  for (int p = 0; p <= 2; ++p)
    for (int d = 0; d <= 1; ++d)
      for (int q = 0; q <= 2; ++q)
        for (int P = 0; P <= 1; ++P)
          for (int Q = 0; Q <= 1; ++Q) grid.push_back(ArimaOrder{p, d, q, P, 0, Q, s});
  return grid;
}

struct ArimaCandidate {
  ArimaOrder order;
  std::optional<ArimaModel> model;
  std::string failure;
};

/// Fits every grid order. `threads` > 1 fits candidates concurrently; the
/// returned vector is always in grid order.
[[nodiscard]] inline std::vector<ArimaCandidate> fit_arima_grid(const TimeSeries& series, int s,
                                                                unsigned threads = 1) {
  const auto grid = arima_order_grid(s);
  std::vector<ArimaCandidate> out(grid.size());
  auto work = [&](std::size_t i) {
    out[i].order = grid[i];
    try {
      out[i].model = fit_arima(series, grid[i]);
    } catch (const Error& e) {
      out[i].failure = e.what();
    }
  };
  if (threads <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) work(i);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < threads; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < grid.size(); i += threads) work(i);
      }));
    }
    for (auto& j : jobs) j.get();
  }
  return out;
}

/// Minimum-AIC order over the grid; ties go to fewer coefficients, then
/// lexicographic order.
[[nodiscard]] inline ArimaModel select_arima_model(const TimeSeries& series, int s,
                                                   unsigned threads = 1) {
  if (s < 2) throw Error(ErrorCode::InvalidArgument, "seasonal period must be at least 2");
  if (series.size() < 3 * static_cast<std::size_t>(s)) {
    throw Error(ErrorCode::SeriesTooShort, "order selection needs at least 3s observations");
  }
  const auto candidates = fit_arima_grid(series, s, threads);
  const ArimaModel* best = nullptr;
  for (const auto& c : candidates) {
    if (!c.model) continue;
    const double aic = c.model->aic();
    if (!std::isfinite(aic)) continue;
    if (best == nullptr) {
      best = &*c.model;
      continue;
    }
    const double best_aic = best->aic();
    if (aic < best_aic ||
        (aic == best_aic && (c.order.coefficient_count() < best->order.coefficient_count()))) {
      best = &*c.model;
    }
  }
  if (best == nullptr) throw Error(ErrorCode::AllFitsFailed, "no ARIMA candidate could be fitted");
  return *best;
}

[[nodiscard]] inline ArimaOrder select_arima_order(const TimeSeries& series, int s,
                                                   unsigned threads = 1) {
  return select_arima_model(series, s, threads).order;
}

/// Forecast by running the ARMA recursion forward with zero future errors,
/// then undoing the differencing. Fitted values are Y_t - e_t.
[[nodiscard]] inline ForecastResult forecast_arima(const TimeSeries& series,
                                                   const ArimaModel& model, std::size_t horizon) {
  detail::require_horizon(horizon);
  model.order.validate();
  const auto w = detail::differenced_or_throw(series, model.order);
  const auto e = detail::conditional_errors(w, model);
  const auto ar = detail::expand_lag_product(model.ar, model.sar, model.order.s);
  const auto ma = detail::expand_lag_product(model.ma, model.sma, model.order.s);

  const std::size_t nw = w.size();
  std::vector<double> x(nw + horizon);
  std::vector<double> err(nw + horizon, 0.0);
  for (std::size_t t = 0; t < nw; ++t) {
    x[t] = w[t] - model.mean;
    err[t] = e[t];
  }
  for (std::size_t t = nw; t < nw + horizon; ++t) {
    double v = 0.0;
    for (std::size_t k = 1; k <= ar.size(); ++k) v += ar[k - 1] * x[t - k];
    for (std::size_t k = 1; k <= ma.size() && k <= t; ++k) v -= ma[k - 1] * err[t - k];
    x[t] = v;
  }

  const auto delta = detail::integration_weights(model.order.d, model.order.D, model.order.s);
  std::vector<double> y(series.values().begin(), series.values().end());
  y.resize(series.size() + horizon);
  for (std::size_t h = 0; h < horizon; ++h) {
    const std::size_t t = series.size() + h;
    double v = x[nw + h] + model.mean;
    for (std::size_t k = 1; k <= delta.size(); ++k) v += delta[k - 1] * y[t - k];
    y[t] = v;
  }

  ForecastResult result;
  result.method = "ARIMA" + model.order.str();
  const std::size_t offset =
      static_cast<std::size_t>(model.order.differencing_span() + model.order.ar_span());
  std::vector<double> fitted(series.size() - offset);
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    fitted[i] = series[offset + i] - e[static_cast<std::size_t>(model.order.ar_span()) + i];
  }
  detail::finish_in_sample(result, series, offset, std::move(fitted));
  result.forecasts.assign(y.begin() + static_cast<long>(series.size()), y.end());

  const auto& o = model.order;
  result.parameters.emplace_back("p", o.p);
  result.parameters.emplace_back("d", o.d);
  result.parameters.emplace_back("q", o.q);
  result.parameters.emplace_back("P", o.P);
  result.parameters.emplace_back("D", o.D);
  result.parameters.emplace_back("Q", o.Q);
  result.parameters.emplace_back("s", o.s);
  for (std::size_t i = 0; i < model.ar.size(); ++i)
    result.parameters.emplace_back("phi_" + std::to_string(i + 1), model.ar[i]);
  for (std::size_t i = 0; i < model.ma.size(); ++i)
    result.parameters.emplace_back("omega_" + std::to_string(i + 1), model.ma[i]);
  for (std::size_t i = 0; i < model.sar.size(); ++i)
    result.parameters.emplace_back("seasonal_phi_" + std::to_string(i + 1), model.sar[i]);
  for (std::size_t i = 0; i < model.sma.size(); ++i)
    result.parameters.emplace_back("seasonal_omega_" + std::to_string(i + 1), model.sma[i]);
  result.parameters.emplace_back("mean", model.mean);
  result.parameters.emplace_back("sigma2", model.sigma2);
  return result;
}

}  // namespace tariffcast
