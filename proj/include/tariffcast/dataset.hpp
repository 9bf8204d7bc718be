#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tariffcast/error.hpp"
#include "tariffcast/series.hpp"

namespace tariffcast {

inline constexpr std::array<std::string_view, 4> kTariffNames{"monochromic", "day", "peak", "night"};

/// Monthly tariff prices sharing one calendar column.
struct TariffDataset {
  YearMonth start;
  std::size_t months = 0;
  std::vector<std::string> names;             // column order of the file
  std::vector<std::vector<double>> columns;   // parallel to names

  [[nodiscard]] YearMonth end() const { return start.plus(static_cast<long>(months) - 1); }

  [[nodiscard]] bool has(std::string_view name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
  }

  [[nodiscard]] TimeSeries series(std::string_view name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      throw Error(ErrorCode::ConfigError, "dataset has no column '" + std::string(name) + "'");
    }
    return TimeSeries(start, columns[static_cast<std::size_t>(it - names.begin())]);
  }

  bool operator==(const TariffDataset&) const = default;
};

namespace detail {

inline std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return fields;
}

inline std::string where(std::size_t row, std::string_view column) {
  return "row " + std::to_string(row) + ", column '" + std::string(column) + "'";
}

}  // namespace detail

/// Parses `date,<tariff>...` CSV text. Dates are `YYYY-MM`, decimals use `.`.
[[nodiscard]] inline TariffDataset parse_tariff_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::ParseError, "empty file");

  TariffDataset ds;
  const auto header = detail::split_fields(lines[0]);
  if (detail::lowercase(header[0]) != "date") {
    throw Error(ErrorCode::ParseError, "row 1: first column must be 'date'");
  }
  if (header.size() < 2) throw Error(ErrorCode::ParseError, "row 1: no price columns");
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string name = detail::lowercase(header[c]);
    if (std::find(kTariffNames.begin(), kTariffNames.end(), name) == kTariffNames.end()) {
      throw Error(ErrorCode::ParseError,
                  "row 1: unknown column '" + std::string(header[c]) +
                      "' (expected monochromic, day, peak or night)");
    }
    if (ds.has(name)) throw Error(ErrorCode::ParseError, "row 1: duplicate column '" + name + "'");
    ds.names.push_back(name);
  }
  ds.columns.resize(ds.names.size());

  if (lines.size() < 2) throw Error(ErrorCode::ParseError, "no data rows");
  YearMonth previous;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::size_t row = r + 1;
    const auto fields = detail::split_fields(lines[r]);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ": expected " +
                                             std::to_string(header.size()) + " fields, found " +
                                             std::to_string(fields.size()));
    }
    const auto month = YearMonth::parse(fields[0]);
    if (!month) {
      throw Error(ErrorCode::ParseError,
                  detail::where(row, "date") + ": '" + std::string(fields[0]) + "' is not YYYY-MM");
    }
    if (r == 1) {
      ds.start = *month;
    } else if (*month <= previous) {
      throw Error(ErrorCode::ParseError, detail::where(row, "date") + ": " + month->str() +
                                             " does not follow " + previous.str());
    } else if (!(*month == previous.plus(1))) {
      throw Error(ErrorCode::GapInCalendar, "missing " + previous.plus(1).str() + " before " +
                                                month->str() + " (row " + std::to_string(row) + ")");
    }
    previous = *month;

    for (std::size_t c = 1; c < fields.size(); ++c) {
      const std::string_view f = fields[c];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::ParseError, detail::where(row, ds.names[c - 1]) + ": '" +
                                               std::string(f) + "' is not a decimal number");
      }
      if (!(v > 0.0)) {
        throw Error(ErrorCode::NonPositivePrice,
                    detail::where(row, ds.names[c - 1]) + ": price " + std::string(f) + " at " +
                        month->str() + " must be positive");
      }
      ds.columns[c - 1].push_back(v);
    }
  }
  ds.months = lines.size() - 1;
  return ds;
}

[[nodiscard]] inline TariffDataset ingest_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tariff_csv(buf.str());
}

/// Shortest decimal text that reads back to the same double.
[[nodiscard]] inline std::string format_shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

[[nodiscard]] inline std::string serialize_csv(const TariffDataset& ds) {
  std::string out = "date";
  for (const auto& n : ds.names) out += "," + n;
  out += "\n";
  for (std::size_t t = 0; t < ds.months; ++t) {
    out += ds.start.plus(static_cast<long>(t)).str();
    for (const auto& col : ds.columns) out += "," + format_shortest(col[t]);
    out += "\n";
  }
  return out;
}

}  // namespace tariffcast
