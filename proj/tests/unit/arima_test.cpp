#include "tariffcast/arima.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"

namespace tc = tariffcast;
using tc::ArimaModel;
using tc::ArimaOrder;

namespace {

constexpr tc::YearMonth kStart{2007, 1};

tc::TimeSeries make(std::vector<double> v) { return tc::TimeSeries(kStart, std::move(v)); }

ArimaModel model_of(ArimaOrder order, std::vector<double> ar = {}, std::vector<double> ma = {},
                    std::vector<double> sar = {}, std::vector<double> sma = {}, double mean = 0.0) {
  ArimaModel m = ArimaModel::zero(order);
  if (!ar.empty()) m.ar = ar;
  if (!ma.empty()) m.ma = ma;
  if (!sar.empty()) m.sar = sar;
  if (!sma.empty()) m.sma = sma;
  m.mean = mean;
  return m;
}

}  // namespace

TEST(ArimaOrder, FormattingAndValidation) {
  EXPECT_EQ((ArimaOrder{0, 1, 0, 0, 0, 1, 12}).str(), "(0,1,0)(0,0,1)_12");
  EXPECT_THROW((ArimaOrder{0, 2, 0, 0, 1, 0, 12}).validate(), tc::Error);
  EXPECT_THROW((ArimaOrder{-1, 0, 0, 0, 0, 0, 12}).validate(), tc::Error);
  EXPECT_NO_THROW((ArimaOrder{2, 1, 2, 1, 0, 1, 4}).validate());
}

TEST(CssResiduals, WhiteNoiseWithSampleMean) {
  const auto y = oracle::simulate_ma(0.0, 1, 40, 3);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= 40.0;
  const auto e = tc::css_residuals(make(y), model_of({0, 0, 0, 0, 0, 0, 12}, {}, {}, {}, {}, mean));
  ASSERT_EQ(e.size(), 40u);
  for (std::size_t t = 0; t < 40; ++t) EXPECT_NEAR(e[t], y[t] - mean, 1e-15);
}

TEST(CssResiduals, NoiselessAr1IsExactlyInverted) {
  std::vector<double> y{1.5};
  for (int t = 1; t < 50; ++t) y.push_back(0.7 * y.back());
  const auto e = tc::css_residuals(make(y), model_of({1, 0, 0, 0, 0, 0, 12}, {0.7}));
  ASSERT_EQ(e.size(), 49u);
  for (double v : e) EXPECT_NEAR(v, 0.0, 1e-10);
}

TEST(CssResiduals, Ma1HandRecursion) {
  // e_t = x_t + 0.5 e_{t-1}, e_0 = 0.
  const std::vector<double> x{1.0, 2.0, -1.0, 0.5, 3.0};
  const std::vector<double> expected{1.0, 2.5, 0.25, 0.625, 3.3125};
  const auto e = tc::css_residuals(make(x), model_of({0, 0, 1, 0, 0, 0, 12}, {}, {0.5}));
  ASSERT_EQ(e.size(), 5u);
  for (std::size_t t = 0; t < 5; ++t) EXPECT_DOUBLE_EQ(e[t], expected[t]);
}

TEST(CssResiduals, RandomWalkOrderGivesFirstDifferences) {
  const auto y = oracle::random_walk(30, 4);
  const auto e = tc::css_residuals(make(y), model_of({0, 1, 0, 0, 0, 0, 12}));
  ASSERT_EQ(e.size(), 29u);
  for (std::size_t t = 0; t < 29; ++t) EXPECT_DOUBLE_EQ(e[t], y[t + 1] - y[t]);
}

TEST(CssResiduals, Errors) {
  try {
    (void)tc::css_residuals(make({1, 2, 3}), model_of({1, 0, 0, 0, 0, 0, 12}, {1.2}));
    FAIL();
  } catch (const tc::Error& e) {
    EXPECT_EQ(e.code(), tc::ErrorCode::NonStationaryParams);
  }
  EXPECT_THROW((void)tc::css_residuals(make({1, 2, 3}), model_of({0, 0, 0, 1, 0, 0, 12})), tc::Error);
}

TEST(Stationarity, StepDownMatchesTriangle) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  for (int rep = 0; rep < 2000; ++rep) {
    const std::vector<double> c{ud(rng), ud(rng)};
    EXPECT_EQ(tc::is_stationary(c), oracle::roots_outside(c)) << c[0] << " " << c[1];
  }
  EXPECT_TRUE(tc::is_stationary(std::vector<double>{}));
  EXPECT_FALSE(tc::is_stationary(std::vector<double>{1.0}));
}

TEST(FitArima, RecoversAr1) {
  const auto y = oracle::simulate_ar1(0.7, 400, 42, 0.0);
  const auto m = tc::fit_arima(make(y), {1, 0, 0, 0, 0, 0, 12});
  EXPECT_NEAR(m.ar[0], 0.7, 0.08);
  EXPECT_EQ(m.effective_observations, 399u);
  EXPECT_GT(m.sigma2, 0.0);
}

TEST(FitArima, RecoversSeasonalMa) {
  const auto y = oracle::simulate_ma(0.6, 12, 480, 43);
  const auto m = tc::fit_arima(make(y), {0, 0, 0, 0, 0, 1, 12});
  EXPECT_NEAR(m.sma[0], 0.6, 0.10);
}

TEST(FitArima, RandomWalkOrderHasNoFreeCoefficients) {
  const auto y = oracle::random_walk(40, 9);
  const auto m = tc::fit_arima(make(y), {0, 1, 0, 0, 0, 0, 12});
  EXPECT_EQ(m.mean, 0.0);
  EXPECT_EQ(m.free_parameter_count(), 0);
  double css = 0.0;
  for (std::size_t t = 1; t < y.size(); ++t) {
    const double d = y[t] - y[t - 1];
    css += d * d;
  }
  EXPECT_NEAR(m.css, css, 1e-12 * css);
}

TEST(FitArima, TooShort) {
  try {
    (void)tc::fit_arima(make(oracle::random_walk(10, 1)), {1, 0, 1, 0, 0, 0, 12});
    FAIL();
  } catch (const tc::Error& e) {
    EXPECT_EQ(e.code(), tc::ErrorCode::SeriesTooShort);
  }
}

TEST(FitArima, BeatsBruteForceScan) {
  const std::vector<ArimaOrder> orders{{1, 0, 0, 0, 0, 0, 12},
                                       {0, 0, 1, 0, 0, 0, 12},
                                       {2, 0, 0, 0, 0, 0, 12},
                                       {1, 0, 1, 0, 0, 0, 12},
                                       {0, 0, 2, 0, 0, 0, 12}};
  for (unsigned seed = 100; seed < 105; ++seed) {
    const auto y = oracle::simulate_ar1(0.4, 60, seed, 1.0);
    for (const auto& order : orders) {
      const auto m = tc::fit_arima(make(y), order);
      EXPECT_TRUE(tc::is_admissible(m));
      EXPECT_NEAR(oracle::css(y, m.ar, m.ma, m.mean), m.css, 1e-9 * m.css);
      const double best = oracle::grid_css(y, order.p, order.q, m.mean);
      EXPECT_LE(m.css, best * (1 + 1e-12)) << order.str() << " seed " << seed;
    }
  }
}

TEST(FitArima, TranslationConsistentWhenDifferenced) {
  const auto y = oracle::random_walk(60, 12);
  std::vector<double> shifted(y);
  for (double& v : shifted) v += 3.25;
  const ArimaOrder order{1, 1, 1, 0, 0, 1, 12};
  const auto a = tc::fit_arima(make(y), order);
  const auto b = tc::fit_arima(make(shifted), order);
  ASSERT_EQ(a.ar.size(), b.ar.size());
  for (std::size_t i = 0; i < a.ar.size(); ++i) EXPECT_NEAR(a.ar[i], b.ar[i], 1e-12);
  for (std::size_t i = 0; i < a.ma.size(); ++i) EXPECT_NEAR(a.ma[i], b.ma[i], 1e-12);
  for (std::size_t i = 0; i < a.sma.size(); ++i) EXPECT_NEAR(a.sma[i], b.sma[i], 1e-12);
  const auto fa = tc::forecast_arima(make(y), a, 12);
  const auto fb = tc::forecast_arima(make(shifted), b, 12);
  for (std::size_t h = 0; h < 12; ++h) EXPECT_NEAR(fb.forecasts[h], fa.forecasts[h] + 3.25, 1e-9);
}

TEST(OrderGrid, ContainsPaperModelAndHas72Entries) {
  const auto grid = tc::arima_order_grid(12);
  EXPECT_EQ(grid.size(), 72u);
  EXPECT_NE(std::find(grid.begin(), grid.end(), ArimaOrder{0, 1, 0, 0, 0, 1, 12}), grid.end());
  for (const auto& o : grid) EXPECT_EQ(o.D, 0);
}

TEST(SelectOrder, RandomWalk) {
  const auto y = oracle::random_walk(120, 2024);
  const auto order = tc::select_arima_order(make(y), 12);
  EXPECT_EQ(order.d, 1);
  EXPECT_EQ(order.p, 0);
  EXPECT_EQ(order.q, 0);
}

TEST(SelectOrder, ThreadCountDoesNotChangeResult) {
  const auto y = oracle::simulate_ar1(0.6, 72, 77, 2.0);
  const auto a = tc::select_arima_model(make(y), 12, 1);
  const auto b = tc::select_arima_model(make(y), 12, 4);
  EXPECT_EQ(a.order, b.order);
  EXPECT_EQ(a.ar, b.ar);
  EXPECT_EQ(a.ma, b.ma);
  EXPECT_EQ(a.css, b.css);
}

TEST(SelectOrder, TooShort) {
  EXPECT_THROW((void)tc::select_arima_order(make(oracle::random_walk(35, 1)), 12), tc::Error);
}

TEST(ForecastArima, RandomWalkRepeatsLastValue) {
  const auto y = oracle::random_walk(30, 5);
  const auto r = tc::forecast_arima(make(y), model_of({0, 1, 0, 0, 0, 0, 12}), 12);
  for (double f : r.forecasts) EXPECT_EQ(f, y.back());
  EXPECT_EQ(r.fitted_offset, 1u);
  for (std::size_t i = 0; i < r.fitted.size(); ++i) EXPECT_EQ(r.fitted[i], y[i]);
}

TEST(ForecastArima, SeasonalMaHandRecursion) {
  // (0,1,0)(0,0,1)_12 with w_t = e_t - W e_{t-12} on the first differences.
  const auto y = oracle::random_walk(30, 6, 0.2);
  const double W = 0.4;
  std::vector<double> e(29, 0.0);
  for (std::size_t t = 0; t < 29; ++t) {
    const double w = y[t + 1] - y[t];
    e[t] = w + (t >= 12 ? W * e[t - 12] : 0.0);
  }
  const auto r = tc::forecast_arima(make(y), model_of({0, 1, 0, 0, 0, 1, 12}, {}, {}, {}, {W}), 13);
  // Step h uses e at differenced index 28 + h - 12.
  double level = y.back();
  for (std::size_t h = 1; h <= 13; ++h) {
    const std::size_t idx = 28 + h - 12;
    const double correction = idx < 29 ? -W * e[idx] : 0.0;
    level += correction;
    EXPECT_NEAR(r.forecasts[h - 1], level, 1e-14) << h;
  }
  EXPECT_NEAR(r.forecasts[0], y.back() - W * e[17], 1e-14);
}

TEST(ForecastArima, Ar1DecaysGeometrically) {
  const auto y = oracle::simulate_ar1(0.6, 50, 21, 3.0);
  const auto m = model_of({1, 0, 0, 0, 0, 0, 12}, {0.6}, {}, {}, {}, 3.1);
  const auto r = tc::forecast_arima(make(y), m, 10);
  for (std::size_t h = 1; h <= 10; ++h) {
    EXPECT_NEAR(r.forecasts[h - 1] - 3.1, std::pow(0.6, static_cast<double>(h)) * (y.back() - 3.1), 1e-10);
  }
}

TEST(ForecastArima, DifferencingRoundTrip) {
  const auto y = oracle::random_walk(60, 13);
  for (const ArimaOrder order : {ArimaOrder{1, 1, 0, 0, 0, 1, 12}, ArimaOrder{1, 0, 1, 0, 1, 0, 12},
                                 ArimaOrder{0, 1, 1, 0, 1, 0, 4}}) {
    auto m = model_of(order, std::vector<double>(static_cast<std::size_t>(order.p), 0.3),
                      std::vector<double>(static_cast<std::size_t>(order.q), -0.2), {},
                      std::vector<double>(static_cast<std::size_t>(order.Q), 0.5));
    const auto r = tc::forecast_arima(make(y), m, 24);
    std::vector<double> extended(y);
    extended.insert(extended.end(), r.forecasts.begin(), r.forecasts.end());
    const auto w = tc::detail::apply_differencing(extended, order);
    const auto w_obs = tc::detail::apply_differencing(y, order);
    const auto e = tc::detail::conditional_errors(w_obs, m);
    const auto ar = tc::detail::expand_lag_product(m.ar, m.sar, order.s);
    const auto ma = tc::detail::expand_lag_product(m.ma, m.sma, order.s);
    // Independent ARMA-level forecast on the differenced scale.
    std::vector<double> x(w_obs), err(e);
    for (std::size_t h = 0; h < 24; ++h) {
      const std::size_t t = x.size();
      double v = 0.0;
      for (std::size_t k = 1; k <= ar.size(); ++k) v += ar[k - 1] * x[t - k];
      for (std::size_t k = 1; k <= ma.size(); ++k) v -= ma[k - 1] * err[t - k];
      x.push_back(v);
      err.push_back(0.0);
    }
    for (std::size_t h = 0; h < 24; ++h) {
      EXPECT_NEAR(w[w_obs.size() + h], x[w_obs.size() + h], 1e-10) << order.str();
    }
  }
}

TEST(ForecastArima, FittedPlusResidualIsActual) {
  const auto y = oracle::simulate_ar1(0.5, 80, 3, 1.0);
  const auto m = tc::fit_arima(make(y), {1, 0, 1, 0, 0, 1, 12});
  const auto r = tc::forecast_arima(make(y), m, 12);
  const auto e = tc::css_residuals(make(y), m);
  ASSERT_EQ(r.residuals.size(), e.size());
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_NEAR(r.residuals[i], e[i], 1e-12);
}
