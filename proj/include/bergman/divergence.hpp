#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "bergman/errors.hpp"
#include "bergman/hankel.hpp"

namespace bergman {

enum class DivergenceVerdict { DivergesLinearly, Converges, Inconclusive };

inline std::string_view to_string(DivergenceVerdict v) {
  switch (v) {
    case DivergenceVerdict::DivergesLinearly: return "DivergesLinearly";
    case DivergenceVerdict::Converges: return "Converges";
    default: return "Inconclusive";
  }
}

/// Thresholds of divergence_fit.
struct DivergenceConfig {
  /// DivergesLinearly needs slope > 0 and R^2 at least this.
  double min_r_squared = 0.99;
  /// Converges when the largest per-unit-N increment in the last quarter of the window is at most this...
  double max_tail_increment = 1e-8;
  /// ...or when per-unit increments decay like N^p with p at most this (a summable tail),
  /// the log-log fit having R^2 >= min_r_squared.
  double max_decay_exponent = -1.5;
};

struct DivergenceReport {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  std::pair<std::uint32_t, std::uint32_t> fit_window{0, 0};
  DivergenceVerdict verdict = DivergenceVerdict::Inconclusive;
  /// Largest (v_{i+1} - v_i) / (N_{i+1} - N_i) over the last quarter of the window.
  double max_tail_increment = 0;
  /// Fitted exponent p of increments ~ N^p over the window; NaN when some increment is not positive.
  double decay_exponent = std::nan("");
};

namespace detail {

struct LinearFit {
  double slope = 0, intercept = 0, r_squared = 0;
};

inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0;
  fit.intercept = my - fit.slope * mx;
  // no variance to explain: report 0 so a flat trace never counts as a linear fit
  fit.r_squared = (sxx > 0 && syy > 0) ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 0.0;
  return fit;
}

}  // namespace detail

/// Fits value ~ slope * N + intercept over the upper half of the trace and
/// classifies the growth.
///
/// DivergesLinearly: slope > 0 and R^2 >= min_r_squared.
/// Converges: the tail increments are below max_tail_increment, or they decay
/// faster than N^max_decay_exponent. Both or neither: Inconclusive.
inline DivergenceReport divergence_fit(const SeriesTrace& trace, const DivergenceConfig& config = {}) {
  const auto& pts = trace.points;
  if (pts.size() < 8) throw usage_error("divergence_fit needs at least 8 trace points");
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].N <= pts[i - 1].N) throw usage_error("divergence_fit needs strictly increasing N");
  if (static_cast<double>(pts.back().N) < 4.0 * std::max<std::uint32_t>(pts.front().N, 1))
    throw usage_error("divergence_fit needs the trace to span at least a factor 4 in N");

  const std::size_t first = pts.size() / 2;
  std::vector<double> xs, ys;
  for (std::size_t i = first; i < pts.size(); ++i) {
    xs.push_back(pts[i].N);
    ys.push_back(pts[i].value);
  }
  const auto fit = detail::least_squares(xs, ys);

  DivergenceReport r;
  r.slope = fit.slope;
  r.intercept = fit.intercept;
  r.r_squared = fit.r_squared;
  r.fit_window = {pts[first].N, pts.back().N};

  std::vector<double> increments, mids;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    increments.push_back((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
    mids.push_back(std::sqrt(xs[i] * xs[i + 1]));
  }
  const std::size_t tail_points = std::max<std::size_t>(2, (xs.size() + 3) / 4);
  const std::size_t tail_first = increments.size() - (tail_points - 1);
  r.max_tail_increment = *std::max_element(increments.begin() + tail_first, increments.end());

  bool summable_decay = false;
  if (increments.size() >= 3 && std::all_of(increments.begin(), increments.end(), [](double d) { return d > 0; })) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < increments.size(); ++i) {
      lx.push_back(std::log(mids[i]));
      ly.push_back(std::log(increments[i]));
    }
    const auto decay = detail::least_squares(lx, ly);
    r.decay_exponent = decay.slope;
    summable_decay = decay.slope <= config.max_decay_exponent && decay.r_squared >= config.min_r_squared;
  }

  const bool converges = r.max_tail_increment <= config.max_tail_increment || summable_decay;
  const bool diverges = r.slope > 0 && r.r_squared >= config.min_r_squared;
  if (diverges && !converges)
    r.verdict = DivergenceVerdict::DivergesLinearly;
  else if (converges && !diverges)
    r.verdict = DivergenceVerdict::Converges;
  else
    r.verdict = DivergenceVerdict::Inconclusive;
  return r;
}

}  // namespace bergman
