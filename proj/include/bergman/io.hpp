#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bergman/divergence.hpp"
#include "bergman/hankel.hpp"
#include "bergman/oracles.hpp"

namespace bergman::io {

using json = nlohmann::ordered_json;

/// Machine formats: 17 significant digits.
inline std::string format_machine(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Human tables: 6 significant digits.
inline std::string format_human(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

namespace detail {

inline std::uint32_t parse_order(std::string_view field, std::string_view context) {
  std::uint32_t v{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
    throw usage_error("invalid truncation order '" + std::string(field) + "' in '" + std::string(context) + "'");
  return v;
}

}  // namespace detail

/// Truncation grids:
///   "start:stop:xF"  geometric, round(start * F^k) <= stop, F > 1
///   "start:stop:+S"  arithmetic, start + k S <= stop
///   "a,b,c"          explicit list
///   "n"              single order
/// Results are strictly increasing; rounding duplicates are dropped.
inline std::vector<std::uint32_t> parse_grid(std::string_view text) {
  std::vector<std::uint32_t> grid;
  const auto c1 = text.find(':');
  if (c1 == std::string_view::npos) {
    std::size_t pos = 0;
    while (true) {
      const auto comma = text.find(',', pos);
      grid.push_back(detail::parse_order(
          text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos), text));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
  } else {
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos || c2 + 2 > text.size())
      throw usage_error("invalid grid '" + std::string(text) + "' (expected start:stop:xF or start:stop:+S)");
    const std::uint32_t start = detail::parse_order(text.substr(0, c1), text);
    const std::uint32_t stop = detail::parse_order(text.substr(c1 + 1, c2 - c1 - 1), text);
    const char mode = text[c2 + 1];
    const auto step_text = text.substr(c2 + 2);
    if (stop < start) throw usage_error("grid stop is below start in '" + std::string(text) + "'");
    if (mode == 'x') {
      const double factor = bergman::detail::parse_double(step_text, text);
      if (!(factor > 1.0)) throw usage_error("geometric grid factor must exceed 1");
      if (start == 0) throw usage_error("geometric grid must start above 0");
      for (int k = 0;; ++k) {
        const double v = std::round(start * std::pow(factor, k));
        if (v > stop) break;
        grid.push_back(static_cast<std::uint32_t>(v));
      }
    } else if (mode == '+') {
      const std::uint32_t step = detail::parse_order(step_text, text);
      if (step == 0) throw usage_error("arithmetic grid step must be positive");
      for (std::uint64_t v = start; v <= stop; v += step) grid.push_back(static_cast<std::uint32_t>(v));
    } else {
      throw usage_error("invalid grid mode in '" + std::string(text) + "' (use xF or +S)");
    }
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t v : grid) {
    if (!out.empty() && v <= out.back()) {
      if (v == out.back()) continue;
      throw usage_error("grid '" + std::string(text) + "' is not increasing");
    }
    out.push_back(v);
  }
  return out;
}

/// CSV with header "N,value,alpha,domain,kind"; alpha is quoted since it contains commas.
inline void write_trace_csv(std::ostream& out, const SeriesTrace& trace) {
  out << "N,value,alpha,domain,kind\n";
  for (const auto& p : trace.points) {
    out << p.N << ',' << format_machine(p.value) << ",\"" << trace.alpha.to_string() << "\",\"" << trace.domain_key
        << "\"," << to_string(trace.kind) << '\n';
  }
}

inline json to_json(const SeriesTrace& trace) {
  json points = json::array();
  for (const auto& p : trace.points) points.push_back({{"N", p.N}, {"value", p.value}});
  return {{"alpha", trace.alpha.to_string()},
          {"domain", trace.domain_key},
          {"kind", to_string(trace.kind)},
          {"points", std::move(points)}};
}

inline json to_json(const DivergenceReport& r) {
  json j = {{"slope", r.slope},
            {"intercept", r.intercept},
            {"r_squared", r.r_squared},
            {"fit_window", {r.fit_window.first, r.fit_window.second}},
            {"verdict", to_string(r.verdict)},
            {"max_tail_increment", r.max_tail_increment}};
  j["decay_exponent"] = std::isnan(r.decay_exponent) ? json(nullptr) : json(r.decay_exponent);
  return j;
}

inline json to_json(const OracleEstimate& e) {
  return {{"value", e.value},
          {"abs_error", e.abs_error},
          {"method", to_string(e.method)},
          {"sample_count", e.sample_count},
          {"seed", e.seed}};
}

}  // namespace bergman::io
