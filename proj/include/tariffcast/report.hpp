#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "tariffcast/registry.hpp"
#include "tariffcast/tournament.hpp"

namespace tariffcast::report {

using nlohmann::ordered_json;

/// Fixed 5-decimal display text.
[[nodiscard]] inline std::string display(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  return buf;
}

/// 5-decimal scientific display text, used for squared errors.
[[nodiscard]] inline std::string display_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

/// Conventions every report carries so that numbers can be interpreted
/// without the source code.
[[nodiscard]] inline ordered_json rules() {
  return ordered_json{
      {"registry_version", kRegistryVersion},
      {"ranking", "ascending by mape, then mad, then msd, then approach id; infeasible approaches last"},
      {"in_sample_errors",
       "mape/mad/msd are computed on in-sample one-step fitted values of each approach"},
      {"msd", "msd is the mean squared error"},
      {"mpe_orientation", "100 * (actual - forecast) / actual"},
      {"approx_error_orientation",
       "100 * (forecast - actual) / actual; negative means the forecast is below the actual"},
      {"seasonality_4", "a 4-observation cycle applied directly to the monthly sequence"},
      {"smoothing_parameters",
       "grid 0.05..0.95 step 0.05 minimizing one-step in-sample mse; ties to the smallest tuple"},
      {"arima",
       "conditional sum of squares; orders p,q in 0..2, d in 0..1, P,Q in 0..1, D fixed at 0; "
       "minimum AIC; mean term only when d + D = 0"},
  };
}

[[nodiscard]] inline ordered_json triple_json(const ErrorTriple& e) {
  return ordered_json{{"mape", e.mape},
                      {"mad", e.mad},
                      {"msd", e.msd},
                      {"display", {{"mape", display(e.mape)},
                                   {"mad", display(e.mad)},
                                   {"msd", display_sci(e.msd)}}}};
}

[[nodiscard]] inline ordered_json approaches_json(const TournamentReport& t) {
  std::vector<std::size_t> rank_of(kApproachCount + 1, 0);
  for (std::size_t r = 0; r < t.ranking.size(); ++r) {
    rank_of[static_cast<std::size_t>(t.ranking[r])] = r + 1;
  }
  ordered_json arr = ordered_json::array();
  for (const auto& o : t.outcomes) {
    ordered_json entry{{"id", o.id},
                       {"descriptor", approach(o.id).description},
                       {"rank", rank_of[static_cast<std::size_t>(o.id)]}};
    if (o.result) {
      entry["status"] = "ok";
      entry["method"] = o.result->method;
      entry["mape"] = o.result->errors.mape;
      entry["mad"] = o.result->errors.mad;
      entry["msd"] = o.result->errors.msd;
      entry["display"] = triple_json(o.result->errors)["display"];
      ordered_json params = ordered_json::object();
      for (const auto& [k, v] : o.result->parameters) params[k] = v;
      entry["parameters"] = std::move(params);
    } else {
      entry["status"] = "infeasible";
      entry["reason"] = o.failure;
    }
    arr.push_back(std::move(entry));
  }
  return arr;
}

[[nodiscard]] inline ordered_json winner_json(int id) {
  return ordered_json{{"id", id}, {"descriptor", approach(id).description}};
}

[[nodiscard]] inline ordered_json forecasts_json(const ForecastResult& r) {
  ordered_json arr = ordered_json::array();
  for (std::size_t h = 0; h < r.forecasts.size(); ++h) {
    arr.push_back({{"month", r.forecast_month(h).str()},
                   {"value", r.forecasts[h]},
                   {"display", display(r.forecasts[h])}});
  }
  return arr;
}

[[nodiscard]] inline ordered_json validation_json(const ValidationReport& v) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : v.rows) {
    rows.push_back({{"month", row.month.str()},
                    {"actual", row.actual},
                    {"forecast", row.forecast},
                    {"approx_error_pct", row.approx_error_pct},
                    {"display", {{"actual", display(row.actual)},
                                 {"forecast", display(row.forecast)},
                                 {"approx_error_pct", display(row.approx_error_pct)}}}});
  }
  return rows;
}

[[nodiscard]] inline ordered_json validation_summary_json(const ValidationReport& v) {
  ordered_json s = triple_json(v.holdout_errors);
  s["mpe"] = v.holdout_mpe;
  s["approach"] = winner_json(v.approach_id);
  s["train"] = {{"start", v.train_start.str()}, {"end", v.train_end.str()}};
  return s;
}

/// Rows of (month, actual, fitted, forecast) for external plotting.
[[nodiscard]] inline ordered_json plot_json(const TimeSeries& series, const ForecastResult& r) {
  ordered_json arr = ordered_json::array();
  for (std::size_t t = 0; t < series.size(); ++t) {
    ordered_json row{{"month", series.month_at(t).str()}, {"actual", series[t]}};
    if (t >= r.fitted_offset && t - r.fitted_offset < r.fitted.size()) {
      row["fitted"] = r.fitted[t - r.fitted_offset];
    } else {
      row["fitted"] = nullptr;
    }
    row["forecast"] = nullptr;
    arr.push_back(std::move(row));
  }
  for (std::size_t h = 0; h < r.forecasts.size(); ++h) {
    arr.push_back({{"month", r.forecast_month(h).str()},
                   {"actual", nullptr},
                   {"fitted", nullptr},
                   {"forecast", r.forecasts[h]}});
  }
  return arr;
}

namespace detail {

inline std::string cell(const ordered_json& v) {
  if (v.is_null()) return "";
  char buf[64];
  const double d = v.get<double>();
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, ptr);
}

}  // namespace detail

/// CSV rendering of plot rows: series,month,actual,fitted,forecast.
[[nodiscard]] inline std::string plot_csv(const std::vector<std::pair<std::string, ordered_json>>& plots) {
  std::string out = "series,month,actual,fitted,forecast\n";
  for (const auto& [name, rows] : plots) {
    for (const auto& row : rows) {
      out += name + "," + row["month"].get<std::string>() + "," + detail::cell(row["actual"]) +
             "," + detail::cell(row["fitted"]) + "," + detail::cell(row["forecast"]) + "\n";
    }
  }
  return out;
}

/// Plain-text rendering of a report document.
[[nodiscard]] inline std::string human(const ordered_json& doc) {
  std::ostringstream os;
  char line[512];
  os << "command: " << doc["command"].get<std::string>() << "\n";
  auto print_approaches = [&](const ordered_json& approaches) {
    std::snprintf(line, sizeof line, "  %4s %3s  %-10s %-10s %-12s  %s\n", "rank", "id", "MAPE",
                  "MAD", "MSD", "approach");
    os << line;
    std::vector<const ordered_json*> sorted;
    for (const auto& a : approaches) sorted.push_back(&a);
    std::sort(sorted.begin(), sorted.end(), [](const auto* l, const auto* r) {
      return (*l)["rank"].template get<int>() < (*r)["rank"].template get<int>();
    });
    for (const auto* a : sorted) {
      if ((*a)["status"] == "ok") {
        std::snprintf(line, sizeof line, "  %4d %3d  %-10s %-10s %-12s  %s\n",
                      (*a)["rank"].get<int>(), (*a)["id"].get<int>(),
                      (*a)["display"]["mape"].get<std::string>().c_str(),
                      (*a)["display"]["mad"].get<std::string>().c_str(),
                      (*a)["display"]["msd"].get<std::string>().c_str(),
                      (*a)["descriptor"].get<std::string>().c_str());
      } else {
        std::snprintf(line, sizeof line, "  %4d %3d  %-34s  %s\n", (*a)["rank"].get<int>(),
                      (*a)["id"].get<int>(), "infeasible",
                      (*a)["descriptor"].get<std::string>().c_str());
      }
      os << line;
    }
  };
  auto print_validation = [&](const ordered_json& rows) {
    std::snprintf(line, sizeof line, "  %-8s %-10s %-10s %s\n", "month", "actual", "forecast",
                  "approx error %");
    os << line;
    for (const auto& r : rows) {
      std::snprintf(line, sizeof line, "  %-8s %-10s %-10s %s\n",
                    r["month"].get<std::string>().c_str(),
                    r["display"]["actual"].get<std::string>().c_str(),
                    r["display"]["forecast"].get<std::string>().c_str(),
                    r["display"]["approx_error_pct"].get<std::string>().c_str());
      os << line;
    }
  };
  auto print_body = [&](const ordered_json& body) {
    if (body.contains("approaches")) print_approaches(body["approaches"]);
    if (body.contains("winner")) {
      os << "  winner: " << body["winner"]["id"].get<int>() << " "
         << body["winner"]["descriptor"].get<std::string>() << "\n";
    }
    if (body.contains("forecasts")) {
      os << "  forecasts:\n";
      for (const auto& f : body["forecasts"]) {
        os << "    " << f["month"].get<std::string>() << "  " << f["display"].get<std::string>()
           << "\n";
      }
    }
    if (body.contains("validation")) {
      print_validation(body["validation"]);
      const auto& s = body["validation_summary"];
      os << "  holdout MAPE " << s["display"]["mape"].get<std::string>() << "  MAD "
         << s["display"]["mad"].get<std::string>() << "  MSD "
         << s["display"]["msd"].get<std::string>() << "\n";
    }
  };
  for (const auto& res : doc["results"]) {
    os << "\nseries: " << res["series"].get<std::string>() << "\n";
    if (res.contains("windows")) {
      for (const auto& w : res["windows"]) {
        os << " window " << w["label"].get<std::string>() << " "
           << w["train"]["start"].get<std::string>() << ":" << w["train"]["end"].get<std::string>()
           << "\n";
        print_body(w);
      }
    } else {
      print_body(res);
    }
  }
  return os.str();
}

}  // namespace tariffcast::report
