#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "reported_triples.hpp"
#include "tariffcast/cli.hpp"
#include "tariffcast/tariffcast.hpp"

namespace tc = tariffcast;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

constexpr tc::YearMonth kStart{2011, 1};

tc::TimeSeries make(const std::vector<double>& v, tc::YearMonth start = kStart) {
  return tc::TimeSeries(start, v);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Check metric_oracle() {
  Check c;
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> len(1, 20);
  std::uniform_real_distribution<double> val(0.01, 10.0);
  std::normal_distribution<double> noise(0.0, 0.5);
  for (int rep = 0; rep < 1000 && c.ok; ++rep) {
    const int n = len(rng);
    std::vector<double> a(n), f(n);
    for (int i = 0; i < n; ++i) {
      a[i] = val(rng) * (rng() % 4 == 0 ? -1.0 : 1.0);
      f[i] = a[i] + noise(rng);
    }
    const tc::PairedSeries p(a, f);
    const std::string at = " at series " + std::to_string(rep);
    c.require(oracle::close_rel(tc::mad(p), oracle::mad(a, f), 1e-12), "MAD" + at);
    c.require(oracle::close_rel(tc::mse(p), oracle::mse(a, f), 1e-12), "MSE" + at);
    c.require(oracle::close_rel(tc::rmse(p), oracle::rmse(a, f), 1e-12), "RMSE" + at);
    c.require(oracle::close_rel(tc::mape(p), oracle::mape(a, f), 1e-12), "MAPE" + at);
    c.require(oracle::close_rel(tc::mpe(p), oracle::mpe(a, f), 1e-12), "MPE" + at);
    const double msd = tc::msd(p);
    const double mse = tc::mse(p);
    c.require(std::memcmp(&msd, &mse, sizeof msd) == 0, "MSD differs from MSE" + at);
  }
  return c;
}

Check ranking_reproduction() {
  Check c;
  const char* names[] = {"monochromic", "day", "peak", "night"};
  auto winner = [](const reported::Block& block, std::size_t column) {
    std::vector<tc::ApproachScore> scores;
    for (int id = 1; id <= tc::kApproachCount; ++id) scores.push_back({id, std::nullopt});
    for (const auto& row : block) {
      scores[static_cast<std::size_t>(row.id - 1)].errors = row.triples[column];
    }
    return tc::rank_approaches(scores).front();
  };
  for (std::size_t col = 0; col < 4; ++col) {
    c.require(winner(reported::kShortWindow, col) == 17,
              std::string("2011-2014 ") + names[col] + " winner is not Holt-Winters s=12");
    c.require(winner(reported::kLongWindow, col) == 19,
              std::string("2007-2014 ") + names[col] + " winner is not ARIMA");
    c.require(winner(reported::kOneYearAhead, col) == 19,
              std::string("2007-2016 ") + names[col] + " winner is not ARIMA");
  }
  return c;
}

Check synthetic_recovery() {
  Check c;
  const auto full = oracle::seasonal_trend(108);
  const auto train = make(std::vector<double>(full.begin(), full.begin() + 96));
  const std::vector<double> truth(full.begin() + 96, full.end());
  auto score = [&](const tc::ForecastResult& r) {
    return tc::mape(tc::PairedSeries(truth, r.forecasts));
  };
  const auto hw = tc::optimize_smoothing_params(tc::SmoothingKind::HoltWinters, train, 12,
                                                tc::CompositionModel::Multiplicative);
  const double m_hw =
      score(tc::holt_winters_forecast(train, 12, hw, tc::CompositionModel::Multiplicative, 12));
  const double m_std = score(tc::forecast_decomposition(
      train, 12, tc::CompositionModel::Multiplicative, tc::IndexMethod::Standard, 12));
  const double m_cma = score(tc::forecast_decomposition(
      train, 12, tc::CompositionModel::Multiplicative, tc::IndexMethod::CenteredMovingAverage, 12));
  const double m_reg = score(tc::forecast_regression(train, 12, 12));
  c.require(m_hw < 1.0, "Holt-Winters MAPE " + fmt(m_hw));
  c.require(m_std < 1.0, "decomposition (standard) MAPE " + fmt(m_std));
  c.require(m_cma < 1.0, "decomposition (moving average) MAPE " + fmt(m_cma));
  c.require(m_reg < 1.0, "regression MAPE " + fmt(m_reg));
  if (c.ok) {
    c.detail = "MAPE hw " + fmt(m_hw) + ", std " + fmt(m_std) + ", cma " + fmt(m_cma) + ", reg " +
               fmt(m_reg);
  }
  return c;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

Check ses_invariance() {
  Check c;
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<int> len(2, 60);
  std::uniform_real_distribution<double> val(0.05, 3.0);
  for (int rep = 0; rep < 100 && c.ok; ++rep) {
    std::vector<double> y(static_cast<std::size_t>(len(rng)));
    for (double& v : y) v = val(rng);
    const auto a = tc::run_approach(11, make(y), 12);
    const auto b = tc::run_approach(12, make(y), 12);
    const double ea[3] = {a.errors.mape, a.errors.mad, a.errors.msd};
    const double eb[3] = {b.errors.mape, b.errors.mad, b.errors.msd};
    c.require(bit_equal(a.forecasts, b.forecasts) && bit_equal(a.fitted, b.fitted) &&
                  bit_equal(a.residuals, b.residuals) && std::memcmp(ea, eb, sizeof ea) == 0 &&
                  a.parameters == b.parameters,
              "outputs differ on series " + std::to_string(rep));
  }
  return c;
}

Check arima_estimation() {
  Check c;
  const auto ar = oracle::simulate_ar1(0.7, 400, 42);
  const auto m_ar = tc::fit_arima(make(ar), {1, 0, 0, 0, 0, 0, 12});
  c.require(std::abs(m_ar.ar[0] - 0.7) <= 0.08, "AR(1) estimate " + fmt(m_ar.ar[0]));

  const auto sma = oracle::simulate_ma(0.6, 12, 480, 43);
  const auto m_sma = tc::fit_arima(make(sma), {0, 0, 0, 0, 0, 1, 12});
  c.require(std::abs(m_sma.sma[0] - 0.6) <= 0.10, "seasonal MA estimate " + fmt(m_sma.sma[0]));

  const auto rw = oracle::random_walk(60, 7);
  const auto m_rw = tc::fit_arima(make(rw), {0, 1, 0, 0, 0, 0, 12});
  const auto f_rw = tc::forecast_arima(make(rw), m_rw, 12);
  for (double f : f_rw.forecasts) c.require(f == rw.back(), "(0,1,0) forecast differs from last value");

  const std::vector<tc::ArimaOrder> orders{{1, 0, 0, 0, 0, 0, 12},
                                           {0, 0, 1, 0, 0, 0, 12},
                                           {2, 0, 0, 0, 0, 0, 12},
                                           {1, 0, 1, 0, 0, 0, 12},
                                           {0, 0, 2, 0, 0, 0, 12}};
  std::mt19937_64 rng(5005);
  std::uniform_real_distribution<double> coef(-0.8, 0.8);
  for (unsigned s = 0; s < 20; ++s) {
    // ARMA(1,1) generators with random coefficients, length 100.
    const double phi = coef(rng);
    const double theta = coef(rng);
    const auto e = oracle::simulate_ma(0.0, 1, 101, 6000 + s);
    std::vector<double> y(100);
    double prev = 0.0;
    for (std::size_t t = 0; t < 100; ++t) {
      prev = phi * prev + e[t + 1] - theta * e[t];
      y[t] = 2.0 + prev;
    }
    for (const auto& order : orders) {
      const auto m = tc::fit_arima(make(y), order);
      const double grid = oracle::grid_css(y, order.p, order.q, m.mean);
      const double own = oracle::css(y, m.ar, m.ma, m.mean);
      c.require(tc::is_admissible(m), order.str() + " fit is not admissible");
      c.require(std::abs(own - m.css) <= 1e-9 * m.css, order.str() + " reported CSS disagrees");
      c.require(m.css <= grid * (1.0 + 1e-12),
                order.str() + " series " + std::to_string(s) + ": CSS " + fmt(m.css) +
                    " above grid best " + fmt(grid));
    }
  }
  if (c.ok) c.detail = "phi " + fmt(m_ar.ar[0]) + ", seasonal omega " + fmt(m_sma.sma[0]);
  return c;
}

Check order_selection() {
  Check c;
  const auto rw = oracle::random_walk(120, 2024);
  const auto order = tc::select_arima_order(make(rw), 12);
  c.require(order.d == 1 && order.p == 0 && order.q == 0, "selected " + order.str());
  const auto grid = tc::arima_order_grid(12);
  c.require(grid.size() == 72, "grid has " + std::to_string(grid.size()) + " orders");
  c.require(std::find(grid.begin(), grid.end(), tc::ArimaOrder{0, 1, 0, 0, 0, 1, 12}) != grid.end(),
            "grid lacks (0,1,0)(0,0,1)_12");
  if (c.ok) c.detail = "selected " + order.str();
  return c;
}

Check index_invariants() {
  Check c;
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> level(0.05, 5.0);
  std::uniform_real_distribution<double> wiggle(0.6, 1.4);
  std::uniform_int_distribution<int> extra(0, 40);
  std::uniform_int_distribution<int> month(0, 11);
  for (int rep = 0; rep < 500 && c.ok; ++rep) {
    const std::size_t period = rep % 2 == 0 ? 12 : 4;
    const std::size_t n = 2 * period + static_cast<std::size_t>(extra(rng));
    std::vector<double> y(n);
    const double base = level(rng);
    for (double& v : y) v = base * wiggle(rng);
    const tc::YearMonth start = kStart.plus(month(rng));
    std::vector<double> scaled(y), shifted(y);
    for (double& v : scaled) v *= 7.3;
    for (double& v : shifted) v += 2.9;
    for (auto method : {tc::IndexMethod::Standard, tc::IndexMethod::CenteredMovingAverage}) {
      const auto mult = tc::seasonal_indices(make(y, start), period, tc::CompositionModel::Multiplicative, method);
      const auto add = tc::seasonal_indices(make(y, start), period, tc::CompositionModel::Additive, method);
      const auto ms = tc::seasonal_indices(make(scaled, start), period, tc::CompositionModel::Multiplicative, method);
      const auto as = tc::seasonal_indices(make(shifted, start), period, tc::CompositionModel::Additive, method);
      double sm = 0.0, sa = 0.0;
      for (double v : mult.indices) sm += v;
      for (double v : add.indices) sa += v;
      const std::string at = " on series " + std::to_string(rep);
      c.require(std::abs(sm - static_cast<double>(period)) <= 1e-12, "multiplicative sum " + fmt(sm) + at);
      c.require(std::abs(sa) <= 1e-12, "additive sum " + fmt(sa) + at);
      for (std::size_t j = 0; j < period; ++j) {
        c.require(std::abs(ms.indices[j] - mult.indices[j]) <= 1e-10, "scale invariance" + at);
        c.require(std::abs(as.indices[j] - add.indices[j]) <= 1e-10, "shift invariance" + at);
      }
    }
  }
  return c;
}

Check ols_correctness() {
  Check c;
  std::mt19937_64 rng(808);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> rows(8, 80);
  std::uniform_int_distribution<int> cols(1, 6);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const int k = cols(rng);
    const int n = std::max(rows(rng), k + 2);
    Eigen::MatrixXd x(n, k);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j) x(i, j) = nd(rng);
      y(i) = nd(rng);
    }
    const auto beta = tc::fit_least_squares(x, y);
    worst = std::max(worst, tc::max_normalized_orthogonality(x, y, beta));
  }
  c.require(worst < 1e-8, "orthogonality " + fmt(worst));

  for (std::size_t period : {4u, 12u}) {
    tc::RegressionModel truth;
    truth.period = period;
    truth.intercept = 0.18;
    truth.trend = 0.0021;
    for (std::size_t j = 2; j <= period; ++j) {
      truth.dummies.push_back(0.004 * static_cast<double>(j) - 0.02);
    }
    const tc::YearMonth start{2010, 5};
    std::vector<double> y(72);
    for (std::size_t t = 0; t < y.size(); ++t) {
      const std::size_t season = tc::season_of(start.plus(static_cast<long>(t)), period) + 1;
      y[t] = truth.predict(static_cast<double>(t + 1), season);
    }
    const auto fit = tc::fit_regression(make(y, start), period);
    double err = std::max(std::abs(fit.intercept - truth.intercept), std::abs(fit.trend - truth.trend));
    for (std::size_t j = 0; j < truth.dummies.size(); ++j) {
      err = std::max(err, std::abs(fit.dummies[j] - truth.dummies[j]));
    }
    c.require(err <= 1e-8, "generator recovery error " + fmt(err) + " for period " + std::to_string(period));
  }
  if (c.ok) c.detail = "max orthogonality " + fmt(worst);
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Check determinism_and_speed(double& seconds) {
  Check c;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() /
                       ("tariffcast_acceptance_" + std::to_string(static_cast<long>(::getpid())));
  fs::create_directories(dir);
  const std::string csv = (dir / "series.csv").string();
  {
    const auto base = oracle::seasonal_trend(96);
    const auto noise = oracle::simulate_ar1(0.4, 96, 909);
    std::string text = "date,monochromic\n";
    for (std::size_t t = 0; t < 96; ++t) {
      text += kStart.plus(static_cast<long>(t)).str() + "," +
              tc::format_shortest(base[t] * (1.0 + 0.003 * noise[t])) + "\n";
    }
    std::ofstream(csv, std::ios::binary) << text;
  }
  auto run = [&](const std::string& threads) {
    const std::string out = (dir / ("report_" + threads + ".json")).string();
    const std::vector<std::string> args{"tariffcast", "validate", "--input", csv, "--train",
                                        "2011-01:2017-12", "--holdout", "2018-01:2018-12",
                                        "--threads", threads, "--out", out};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream sink_out, sink_err;
    const int status = tc::cli::run(static_cast<int>(argv.size()), argv.data(), sink_out, sink_err);
    c.require(status == 0, "validate exited " + std::to_string(status) + ": " + sink_err.str());
    return read_file(out);
  };
  const auto t0 = std::chrono::steady_clock::now();
  const std::string first = run("1");
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string second = run("1");
  const std::string threaded = run("4");
  c.require(seconds < 10.0, "tournament plus validation took " + fmt(seconds) + " s");
  c.require(!first.empty() && first == second, "repeated runs differ");
  c.require(first == threaded, "threaded run differs");
  std::error_code ec;
  fs::remove_all(dir, ec);
  return c;
}

Check sign_convention() {
  Check c;
  std::vector<double> actual(12), forecast(12);
  for (std::size_t m = 0; m < 12; ++m) {
    actual[m] = 0.26 + 0.002 * static_cast<double>(m);
    forecast[m] = actual[m] * (m < 3 ? 0.985 : 1.012);
  }
  const auto v = tc::build_validation_report(make(actual, {2015, 1}), forecast, 17);
  c.require(v.rows.size() == 12, "report has " + std::to_string(v.rows.size()) + " rows");
  for (std::size_t m = 0; m < v.rows.size(); ++m) {
    const bool negative = v.rows[m].approx_error_pct < 0.0;
    c.require(negative == (m < 3), "month " + v.rows[m].month.str() + " has the wrong sign");
  }
  const auto doc = tc::report::validation_json(v);
  c.require(doc.size() == 12 && doc[0]["month"] == "2015-01" && doc[0]["approx_error_pct"].get<double>() < 0,
            "serialized report does not carry the signs");
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    double limit_seconds;  // 0 when no runtime bound applies
    std::function<Check(double&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "metric oracle equivalence", 1.0, [](double&) { return metric_oracle(); }},
      {2, "reported ranking reproduction", 0.0, [](double&) { return ranking_reproduction(); }},
      {3, "synthetic seasonal recovery", 5.0, [](double&) { return synthetic_recovery(); }},
      {4, "SES seasonality invariance", 0.0, [](double&) { return ses_invariance(); }},
      {5, "ARIMA estimation", 30.0, [](double&) { return arima_estimation(); }},
      {6, "order selection sanity", 0.0, [](double&) { return order_selection(); }},
      {7, "seasonal index invariants", 0.0, [](double&) { return index_invariants(); }},
      {8, "OLS correctness", 0.0, [](double&) { return ols_correctness(); }},
      {9, "end-to-end determinism and speed", 0.0, [](double& s) { return determinism_and_speed(s); }},
      {10, "sign convention", 0.0, [](double&) { return sign_convention(); }},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    double inner = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    Check result;
    try {
      result = criterion.run(inner);
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (criterion.limit_seconds > 0.0 && elapsed >= criterion.limit_seconds) {
      result.require(false, "took " + fmt(elapsed) + " s, limit " + fmt(criterion.limit_seconds) + " s");
    }
    if (!result.ok) ++failures;
    std::printf("%s criterion %d: %s (%.3f s)%s%s\n", result.ok ? "PASS" : "FAIL", criterion.number,
                criterion.name, elapsed, result.detail.empty() ? "" : " - ",
                result.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
