#pragma once

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tariffcast/dataset.hpp"
#include "tariffcast/error.hpp"
#include "tariffcast/registry.hpp"
#include "tariffcast/report.hpp"
#include "tariffcast/tournament.hpp"

namespace tariffcast::cli {

using nlohmann::ordered_json;

enum ExitStatus : int {
  kOk = 0,
  kConfigError = 2,
  kDataError = 3,
  kNoFeasibleApproach = 4,
};

[[nodiscard]] inline int exit_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::HoldoutTooShort:
      return kConfigError;
    case ErrorCode::NoFeasibleApproach:
    case ErrorCode::ApproachInfeasible:
      return kNoFeasibleApproach;
    default:
      return kDataError;
  }
}

struct RunConfig {
  std::string command;
  std::string input;
  std::string series = "all";
  std::optional<TrainingWindow> train;
  std::optional<TrainingWindow> holdout;
  std::optional<TrainingWindow> window_a;
  std::optional<TrainingWindow> window_b;
  std::size_t horizon = 12;
  std::string approach = "all";
  int seasonality = 12;
  std::string out;
  std::string format = "json";
  unsigned threads = 1;
};

/// Parses `YYYY-MM:YYYY-MM`.
[[nodiscard]] inline TrainingWindow parse_window(const std::string& text, const std::string& flag) {
  const auto colon = text.find(':');
  std::optional<YearMonth> a;
  std::optional<YearMonth> b;
  if (colon != std::string::npos) {
    a = YearMonth::parse(std::string_view(text).substr(0, colon));
    b = YearMonth::parse(std::string_view(text).substr(colon + 1));
  }
  if (!a || !b || *b < *a) {
    throw Error(ErrorCode::ConfigError,
                flag + " expects START:END as YYYY-MM:YYYY-MM, got '" + text + "'");
  }
  return TrainingWindow{*a, *b};
}

namespace detail {

inline ordered_json window_json(const std::optional<TrainingWindow>& w) {
  if (!w) return nullptr;
  return ordered_json{{"start", w->start.str()}, {"end", w->end.str()}};
}

inline ordered_json config_json(const RunConfig& c) {
  return ordered_json{{"input", c.input},
                      {"series", c.series},
                      {"train", window_json(c.train)},
                      {"holdout", window_json(c.holdout)},
                      {"window_a", window_json(c.window_a)},
                      {"window_b", window_json(c.window_b)},
                      {"horizon", c.horizon},
                      {"approach", c.approach},
                      {"seasonality", c.seasonality},
                      {"format", c.format}};
}

inline std::vector<std::string> selected_series(const TariffDataset& ds, const RunConfig& c) {
  if (c.series == "all") return ds.names;
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= c.series.size()) {
    auto comma = c.series.find(',', pos);
    if (comma == std::string::npos) comma = c.series.size();
    const std::string name = tariffcast::detail::lowercase(c.series.substr(pos, comma - pos));
    if (!ds.has(name)) {
      throw Error(ErrorCode::ConfigError, "series '" + name + "' is not in the input file");
    }
    out.push_back(name);
    pos = comma + 1;
  }
  return out;
}

inline std::optional<int> approach_id(const RunConfig& c) {
  if (c.approach == "all") return std::nullopt;
  int id = 0;
  const auto [ptr, ec] = std::from_chars(c.approach.data(), c.approach.data() + c.approach.size(), id);
  if (ec != std::errc() || ptr != c.approach.data() + c.approach.size() || id < 1 ||
      id > kApproachCount) {
    throw Error(ErrorCode::ConfigError, "--approach expects 1..19 or 'all', got '" + c.approach + "'");
  }
  return id;
}

inline void require_within(const TariffDataset& ds, const TrainingWindow& w, const std::string& flag) {
  if (w.start < ds.start || ds.end() < w.end) {
    throw Error(ErrorCode::ConfigError, flag + " " + w.start.str() + ":" + w.end.str() +
                                            " lies outside the data " + ds.start.str() + ":" +
                                            ds.end().str());
  }
}

inline void require_follows(const TrainingWindow& train, const TrainingWindow& holdout) {
  if (!(holdout.start == train.end.plus(1))) {
    throw Error(ErrorCode::ConfigError, "--holdout must start the month after training ends (" +
                                            train.end.plus(1).str() + ")");
  }
}

inline RunOptions run_options(const RunConfig& c) { return RunOptions{c.seasonality, c.threads}; }

inline ordered_json tournament_body(const TournamentReport& t) {
  return ordered_json{{"train", {{"start", t.train_start.str()}, {"end", t.train_end.str()}}},
                      {"approaches", report::approaches_json(t)},
                      {"winner", report::winner_json(t.winner)}};
}

}  // namespace detail

/// Runs the workflow named by `config.command` and returns the report document.
[[nodiscard]] inline ordered_json execute(const RunConfig& config,
                                          std::vector<std::pair<std::string, ordered_json>>* plots = nullptr) {
  if (config.horizon < 1) throw Error(ErrorCode::ConfigError, "--horizon must be at least 1");
  if (config.seasonality != 4 && config.seasonality != 12) {
    throw Error(ErrorCode::ConfigError, "--seasonality must be 4 or 12");
  }
  const TariffDataset ds = ingest_csv(config.input);
  const auto names = detail::selected_series(ds, config);
  const auto id = detail::approach_id(config);
  const RunOptions options = detail::run_options(config);

  ordered_json doc{{"tool", "tariffcast"},
                   {"command", config.command},
                   {"config", detail::config_json(config)},
                   {"rules", report::rules()},
                   {"results", ordered_json::array()}};

  for (const auto& name : names) {
    const TimeSeries full = ds.series(name);
    ordered_json body{{"series", name}};

    if (config.command == "tournament" || config.command == "forecast") {
      const TrainingWindow train = config.train.value_or(TrainingWindow{ds.start, ds.end()});
      detail::require_within(ds, train, "--train");
      const TimeSeries series = full.slice(train.start, train.end);
      ForecastResult chosen;
      if (config.command == "forecast" && id) {
        body["train"] = {{"start", series.start().str()}, {"end", series.end().str()}};
        chosen = run_approach(*id, series, config.horizon, options);
        body["winner"] = report::winner_json(*id);
      } else {
        const TournamentReport t = run_tournament(series, config.horizon, options);
        body.update(detail::tournament_body(t));
        chosen = t.winning_result();
      }
      body["forecasts"] = report::forecasts_json(chosen);
      if (config.command == "forecast") {
        body["plot"] = report::plot_json(series, chosen);
        if (plots) plots->emplace_back(name, body["plot"]);
      }
    } else if (config.command == "validate") {
      if (!config.holdout) throw Error(ErrorCode::ConfigError, "validate requires --holdout");
      const TrainingWindow holdout = *config.holdout;
      const TrainingWindow train =
          config.train.value_or(TrainingWindow{ds.start, holdout.start.plus(-1)});
      detail::require_within(ds, train, "--train");
      detail::require_within(ds, holdout, "--holdout");
      detail::require_follows(train, holdout);
      const TimeSeries series = full.slice(train.start, holdout.end);
      int chosen = 0;
      if (id) {
        chosen = *id;
      } else {
        const TournamentReport t =
            run_tournament(series.slice(train.start, train.end), config.horizon, options);
        body.update(detail::tournament_body(t));
        chosen = t.winner;
      }
      const auto length = static_cast<std::size_t>(holdout.start.months_until(holdout.end) + 1);
      const ValidationReport v = validate_holdout(series, train.end, chosen, length, options);
      body["winner"] = report::winner_json(chosen);
      body["forecasts"] = report::forecasts_json(*v.fit);
      body["validation"] = report::validation_json(v);
      body["validation_summary"] = report::validation_summary_json(v);
    } else if (config.command == "compare-windows") {
      if (!config.window_a || !config.window_b || !config.holdout) {
        throw Error(ErrorCode::ConfigError,
                    "compare-windows requires --window-a, --window-b and --holdout");
      }
      const TrainingWindow a = *config.window_a;
      const TrainingWindow b = *config.window_b;
      const TrainingWindow holdout = *config.holdout;
      if (!(a.end == b.end)) {
        throw Error(ErrorCode::ConfigError, "--window-a and --window-b must end in the same month");
      }
      detail::require_within(ds, a, "--window-a");
      detail::require_within(ds, b, "--window-b");
      detail::require_within(ds, holdout, "--holdout");
      detail::require_follows(a, holdout);
      const YearMonth first = std::min(a.start, b.start);
      const auto length = static_cast<std::size_t>(holdout.start.months_until(holdout.end) + 1);
      const WindowComparison cmp =
          compare_windows(full.slice(first, holdout.end), a, b, length, options);
      ordered_json windows = ordered_json::array();
      for (const auto& [label, w] : {std::pair<const char*, const WindowResult*>{"a", &cmp.a},
                                     std::pair<const char*, const WindowResult*>{"b", &cmp.b}}) {
        ordered_json entry{{"label", label}};
        entry.update(detail::tournament_body(w->tournament));
        entry["forecasts"] = report::forecasts_json(*w->validation.fit);
        entry["validation"] = report::validation_json(w->validation);
        entry["validation_summary"] = report::validation_summary_json(w->validation);
        windows.push_back(std::move(entry));
      }
      body["windows"] = std::move(windows);
    } else {
      throw Error(ErrorCode::ConfigError, "unknown command '" + config.command + "'");
    }
    doc["results"].push_back(std::move(body));
  }
  return doc;
}

[[nodiscard]] inline std::string error_json(const std::string& code, const std::string& message,
                                            int status) {
  return ordered_json{{"error", {{"code", code}, {"message", message}, {"exit_status", status}}}}
      .dump();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot write '" + path + "'");
  f << content;
}

/// Full command-line entry point. Reports go to `out` (or --out), errors to
/// `err` as a JSON object.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monthly electricity tariff price forecasting"};
  app.require_subcommand(1);
  RunConfig config;
  std::string train, holdout, window_a, window_b;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", config.input, "CSV file: date,monochromic,day,peak,night")->required();
    sub->add_option("--series", config.series, "tariff column(s), comma separated, or 'all'");
    sub->add_option("--horizon", config.horizon, "months to forecast");
    sub->add_option("--approach", config.approach, "approach id 1..19 or 'all'");
    sub->add_option("--seasonality", config.seasonality, "seasonal period for ARIMA (4 or 12)");
    sub->add_option("--out", config.out, "report path (stdout when omitted)");
    sub->add_option("--format", config.format, "json or human")->check(CLI::IsMember({"json", "human"}));
    sub->add_option("--threads", config.threads, "worker threads");
    sub->add_option("--train", train, "training window YYYY-MM:YYYY-MM");
  };
  auto* forecast = app.add_subcommand("forecast", "forecast with one approach or the tournament winner");
  auto* tournament = app.add_subcommand("tournament", "rank all nineteen approaches");
  auto* validate = app.add_subcommand("validate", "score forecasts against a holdout span");
  auto* compare = app.add_subcommand("compare-windows", "compare two training windows on a holdout");
  for (auto* sub : {forecast, tournament, validate, compare}) add_common(sub);
  validate->add_option("--holdout", holdout, "holdout window YYYY-MM:YYYY-MM");
  compare->add_option("--holdout", holdout, "holdout window YYYY-MM:YYYY-MM");
  compare->add_option("--window-a", window_a, "first training window");
  compare->add_option("--window-b", window_b, "second training window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << error_json("ConfigError", e.what(), kConfigError) << "\n";
    return kConfigError;
  }

  try {
    config.command = app.get_subcommands().front()->get_name();
    if (!train.empty()) config.train = parse_window(train, "--train");
    if (!holdout.empty()) config.holdout = parse_window(holdout, "--holdout");
    if (!window_a.empty()) config.window_a = parse_window(window_a, "--window-a");
    if (!window_b.empty()) config.window_b = parse_window(window_b, "--window-b");

    std::vector<std::pair<std::string, ordered_json>> plots;
    const ordered_json doc = execute(config, &plots);
    const std::string text = config.format == "human" ? report::human(doc) : doc.dump(2) + "\n";
    if (config.out.empty()) {
      out << text;
    } else {
      write_file(config.out, text);
      if (!plots.empty()) {
        std::filesystem::path plot_path(config.out);
        plot_path.replace_extension(".plot.csv");
        write_file(plot_path.string(), report::plot_csv(plots));
      }
    }
    return kOk;
  } catch (const Error& e) {
    const int status = exit_status_for(e.code());
    err << error_json(std::string(to_string(e.code())), e.what(), status) << "\n";
    return status;
  }
}

}  // namespace tariffcast::cli
