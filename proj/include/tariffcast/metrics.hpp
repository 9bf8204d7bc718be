#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tariffcast/error.hpp"

namespace tariffcast {

/// MAPE (percent), MAD and MSD (price units and squared price units).
struct ErrorTriple {
  double mape = 0.0;
  double mad = 0.0;
  double msd = 0.0;

  bool operator==(const ErrorTriple&) const = default;
};

/// Actual and predicted values of equal, nonzero length.
class PairedSeries {
 public:
  PairedSeries(std::span<const double> actual, std::span<const double> predicted)
      : actual_(actual), predicted_(predicted) {
    if (actual_.empty() || predicted_.empty()) {
      throw Error(ErrorCode::EmptyInput, "paired series is empty");
    }
    if (actual_.size() != predicted_.size()) {
      throw Error(ErrorCode::LengthMismatch,
                  "actual has " + std::to_string(actual_.size()) + " values, predicted has " +
                      std::to_string(predicted_.size()));
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return actual_.size(); }
  [[nodiscard]] std::span<const double> actual() const noexcept { return actual_; }
  [[nodiscard]] std::span<const double> predicted() const noexcept { return predicted_; }

 private:
  std::span<const double> actual_;
  std::span<const double> predicted_;
};

namespace detail {

inline void require_nonzero_actuals(const PairedSeries& pairs) {
  const auto a = pairs.actual();
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (a[t] == 0.0) {
      throw Error(ErrorCode::ZeroActual, "actual value at position " + std::to_string(t) + " is 0");
    }
  }
}

}  // namespace detail

/// Mean absolute deviation.
[[nodiscard]] inline double mad(const PairedSeries& pairs) {
  const auto a = pairs.actual();
  const auto f = pairs.predicted();
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) s += std::abs(a[t] - f[t]);
  return s / static_cast<double>(a.size());
}

/// Mean squared error.
[[nodiscard]] inline double mse(const PairedSeries& pairs) {
  const auto a = pairs.actual();
  const auto f = pairs.predicted();
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double e = a[t] - f[t];
    s += e * e;
  }
  return s / static_cast<double>(a.size());
}

/// Mean squared deviation; the same quantity as mse.
[[nodiscard]] inline double msd(const PairedSeries& pairs) { return mse(pairs); }

[[nodiscard]] inline double rmse(const PairedSeries& pairs) { return std::sqrt(mse(pairs)); }

/// Mean absolute percentage error, in percent.
[[nodiscard]] inline double mape(const PairedSeries& pairs) {
  detail::require_nonzero_actuals(pairs);
  const auto a = pairs.actual();
  const auto f = pairs.predicted();
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) s += std::abs(a[t] - f[t]) / std::abs(a[t]);
  return 100.0 * s / static_cast<double>(a.size());
}

/// Mean percentage error, in percent. Positive means the forecast runs low.
[[nodiscard]] inline double mpe(const PairedSeries& pairs) {
  detail::require_nonzero_actuals(pairs);
  const auto a = pairs.actual();
  const auto f = pairs.predicted();
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) s += (a[t] - f[t]) / a[t];
  return 100.0 * s / static_cast<double>(a.size());
}

/// Per-period 100 * (forecast - actual) / actual. Under-forecasts are negative.
[[nodiscard]] inline std::vector<double> approximation_percentage_errors(const PairedSeries& pairs) {
  detail::require_nonzero_actuals(pairs);
  const auto a = pairs.actual();
  const auto f = pairs.predicted();
  std::vector<double> out(a.size());
  for (std::size_t t = 0; t < a.size(); ++t) out[t] = 100.0 * (f[t] - a[t]) / a[t];
  return out;
}

[[nodiscard]] inline ErrorTriple error_triple(const PairedSeries& pairs) {
  return ErrorTriple{mape(pairs), mad(pairs), msd(pairs)};
}

}  // namespace tariffcast
