#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdio>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tariffcast/error.hpp"

namespace tariffcast {

/// A calendar month. Ordering and arithmetic work on the absolute month count.
struct YearMonth {
  int year = 1970;
  int month = 1;  // 1..12

  [[nodiscard]] constexpr long index() const noexcept {
    return static_cast<long>(year) * 12 + (month - 1);
  }

  [[nodiscard]] static constexpr YearMonth from_index(long idx) noexcept {
    long y = idx / 12;
    long m = idx % 12;
    if (m < 0) {
      m += 12;
      --y;
    }
    return YearMonth{static_cast<int>(y), static_cast<int>(m + 1)};
  }

  [[nodiscard]] constexpr YearMonth plus(long months) const noexcept {
    return from_index(index() + months);
  }

  [[nodiscard]] constexpr long months_until(const YearMonth& other) const noexcept {
    return other.index() - index();
  }

  constexpr auto operator<=>(const YearMonth& other) const noexcept {
    return index() <=> other.index();
  }
  constexpr bool operator==(const YearMonth&) const noexcept = default;

  [[nodiscard]] std::string str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
  }

  /// Parses `YYYY-MM`. Returns nullopt on any deviation from that shape.
  [[nodiscard]] static std::optional<YearMonth> parse(std::string_view text) {
    if (text.size() != 7 || text[4] != '-') return std::nullopt;
    int y = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      y = y * 10 + (text[i] - '0');
    }
    if (text[5] < '0' || text[5] > '9' || text[6] < '0' || text[6] > '9') return std::nullopt;
    const int m = (text[5] - '0') * 10 + (text[6] - '0');
    if (m < 1 || m > 12) return std::nullopt;
    return YearMonth{y, m};
  }
};

/// Position of a calendar month inside a cycle of `period` observations.
/// For period 12 this is the calendar month (0 = January); other periods
/// count observations from the absolute month epoch.
[[nodiscard]] inline std::size_t season_of(const YearMonth& when, std::size_t period) {
  const long p = static_cast<long>(period);
  long r = when.index() % p;
  if (r < 0) r += p;
  return static_cast<std::size_t>(r);
}

/// Contiguous monthly observations anchored at a calendar month.
class TimeSeries {
 public:
  TimeSeries(YearMonth start, std::vector<double> values,
             std::optional<std::size_t> period_hint = std::nullopt)
      : start_(start), values_(std::move(values)), period_hint_(period_hint) {
    if (values_.empty()) {
      throw Error(ErrorCode::SeriesTooShort, "time series needs at least one observation");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw Error(ErrorCode::InvalidArgument,
                    "non-finite value at " + start_.plus(static_cast<long>(i)).str());
      }
    }
    if (period_hint_ && *period_hint_ != 4 && *period_hint_ != 12) {
      throw Error(ErrorCode::InvalidArgument, "period hint must be 4 or 12");
    }
  }

  [[nodiscard]] const YearMonth& start() const noexcept { return start_; }
  [[nodiscard]] YearMonth end() const noexcept {
    return start_.plus(static_cast<long>(values_.size()) - 1);
  }
  [[nodiscard]] YearMonth month_at(std::size_t t) const noexcept {
    return start_.plus(static_cast<long>(t));
  }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double operator[](std::size_t t) const noexcept { return values_[t]; }
  [[nodiscard]] std::optional<std::size_t> period_hint() const noexcept { return period_hint_; }

  /// Season position of observation t for the given period.
  [[nodiscard]] std::size_t season(std::size_t t, std::size_t period) const {
    return season_of(month_at(t), period);
  }

  /// Observations in [first, last], both inclusive calendar months.
  [[nodiscard]] TimeSeries slice(YearMonth first, YearMonth last) const {
    const long lo = start_.months_until(first);
    const long hi = start_.months_until(last);
    if (lo < 0 || hi >= static_cast<long>(values_.size()) || hi < lo) {
      throw Error(ErrorCode::InvalidArgument,
                  "window " + first.str() + ":" + last.str() + " lies outside " + start_.str() +
                      ":" + end().str());
    }
    return TimeSeries(first,
                      std::vector<double>(values_.begin() + lo, values_.begin() + hi + 1),
                      period_hint_);
  }

  [[nodiscard]] bool all_positive() const noexcept {
    for (double v : values_) {
      if (!(v > 0.0)) return false;
    }
    return true;
  }

  bool operator==(const TimeSeries&) const = default;

 private:
  YearMonth start_;
  std::vector<double> values_;
  std::optional<std::size_t> period_hint_;
};

/// Lag-k differences Y_t - Y_{t-k}. The anchor advances k months.
[[nodiscard]] inline TimeSeries difference(const TimeSeries& series, std::size_t lag) {
  const std::size_t n = series.size();
  if (lag == 0) throw Error(ErrorCode::InvalidArgument, "lag must be positive");
  if (lag >= n) {
    throw Error(ErrorCode::LagTooLarge,
                "lag " + std::to_string(lag) + " >= series length " + std::to_string(n));
  }
  std::vector<double> out(n - lag);
  for (std::size_t t = lag; t < n; ++t) out[t - lag] = series[t] - series[t - lag];
  return TimeSeries(series.start().plus(static_cast<long>(lag)), std::move(out),
                    series.period_hint());
}

/// Sample autocorrelations r_1..r_max_lag using the full-series mean and
/// the full-series sum of squares as denominator.
[[nodiscard]] inline std::vector<double> autocorrelation(const TimeSeries& series,
                                                         std::size_t max_lag) {
  const std::size_t n = series.size();
  if (max_lag == 0) throw Error(ErrorCode::InvalidArgument, "max_lag must be positive");
  if (n < max_lag + 2) {
    throw Error(ErrorCode::SeriesTooShort, "autocorrelation to lag " + std::to_string(max_lag) +
                                               " needs at least " + std::to_string(max_lag + 2) +
                                               " observations");
  }
  const auto v = series.values();
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  double denom = 0.0;
  for (double y : v) denom += (y - mean) * (y - mean);
  if (denom == 0.0) throw Error(ErrorCode::ConstantSeries, "series has zero variance");

  std::vector<double> r(max_lag);
  for (std::size_t k = 1; k <= max_lag; ++k) {
    double num = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) num += (v[t] - mean) * (v[t + k] - mean);
    r[k - 1] = num / denom;
  }
  return r;
}

/// Centered moving average of window k. Odd k averages k points around each
/// interior observation; even k averages two adjacent k-term means (2xk) so
/// the result sits on calendar months.
[[nodiscard]] inline TimeSeries centered_moving_average(const TimeSeries& series, std::size_t k) {
  const std::size_t n = series.size();
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "window must be positive");
  const bool even = k % 2 == 0;
  if (n < k + (even ? 1 : 0)) {
    throw Error(ErrorCode::SeriesTooShort, "series of length " + std::to_string(n) +
                                               " too short for a " + std::to_string(k) +
                                               "-term centered average");
  }
  const auto v = series.values();
  const double dk = static_cast<double>(k);

  std::vector<double> simple(n - k + 1);
  for (std::size_t i = 0; i + k <= n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += v[i + j];
    simple[i] = s / dk;
  }
  if (!even) {
    return TimeSeries(series.start().plus(static_cast<long>((k - 1) / 2)), std::move(simple),
                      series.period_hint());
  }
  std::vector<double> centered(n - k);
  for (std::size_t i = 0; i + 1 < simple.size(); ++i) {
    centered[i] = 0.5 * (simple[i] + simple[i + 1]);
  }
  return TimeSeries(series.start().plus(static_cast<long>(k / 2)), std::move(centered),
                    series.period_hint());
}

}  // namespace tariffcast
