#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "bergman/domain.hpp"
#include "bergman/errors.hpp"

namespace bergman {

/// Working precision of the log-domain kernels.
///
/// lnGamma grows like x ln x, so a 1e-12 absolute bound at x ~ 6e4 needs
/// about 19 significant digits: the x87 extended format on x86-64, or
/// binary128 where long double is quad.
using log_real = long double;

static_assert(std::numeric_limits<log_real>::digits >= 64,
              "the log-Gamma error bound needs a long double with at least a 64-bit mantissa");

/// ln Gamma(x) together with a bound on its absolute error.
struct LogGammaValue {
  log_real value = 0;
  double abs_error_bound = 0;
};

/// Largest argument for which log_gamma certifies its 1e-12 bound.
inline constexpr double kLogGammaMaxArgument = 65536.0;

namespace detail {

// B_{2k} / (2k (2k-1)), k = 1..10
inline constexpr log_real kStirlingCoefficients[] = {
    1.0L / 12.0L,
    -1.0L / 360.0L,
    1.0L / 1260.0L,
    -1.0L / 1680.0L,
    1.0L / 1188.0L,
    -691.0L / 360360.0L,
    1.0L / 156.0L,
    -3617.0L / 122400.0L,
    43867.0L / 244188.0L,
    -174611.0L / 125400.0L,
};

// Arguments are shifted to at least this value before the asymptotic series.
inline constexpr log_real kSeriesThreshold = 15.0L;

inline constexpr log_real kHalfLogTwoPi = 0.918938533204672741780329736405617639861L;

inline void require_positive_finite(log_real x, const char* fn) {
  if (!(std::isfinite(x) && x > 0.0))
    throw domain_error(std::string(fn) + ": argument must be positive and finite");
}

}  // namespace detail

/// ln Gamma(x) for 0 < x <= kLogGammaMaxArgument, with |error| <= 1e-12.
///
/// Small arguments are shifted up with Gamma(x+1) = x Gamma(x) until x >= 15,
/// where ten terms of the Stirling series leave a truncation error below 1e-20.
inline LogGammaValue log_gamma(log_real x) {
  detail::require_positive_finite(x, "log_gamma");
  if (x > kLogGammaMaxArgument)
    throw domain_error("log_gamma: argument " + std::to_string(static_cast<double>(x)) + " exceeds the certified range (max " +
                       std::to_string(kLogGammaMaxArgument) + ")");
  if (x == 1 || x == 2) return {0, 0};

  log_real y = x;
  log_real shift_product = 1;
  int shifts = 0;
  while (y < detail::kSeriesThreshold) {
    shift_product *= y;
    y += 1;
    ++shifts;
  }

  const log_real log_y = std::log(y);
  const log_real inv_y = 1 / y;
  const log_real inv_y2 = inv_y * inv_y;
  log_real series = 0;
  log_real power = inv_y;
  for (log_real c : detail::kStirlingCoefficients) {
    series += c * power;
    power *= inv_y2;
  }
  const log_real leading = (y - 0.5L) * log_y - y;
  const log_real log_shift = shifts ? std::log(shift_product) : 0;
  const log_real value = leading + detail::kHalfLogTwoPi + series - log_shift;

  // Truncation: first omitted term is B_22 / (22 * 21) * y^-21, |B_22 / 462| < 13.5.
  const log_real eps = std::numeric_limits<log_real>::epsilon();
  const log_real truncation = 13.5L * power;
  const log_real rounding =
      4 * eps * (std::abs((y - 0.5L) * log_y) + y + std::abs(log_shift) + (shifts + 2) + std::abs(value));
  return {value, static_cast<double>(truncation + rounding)};
}

/// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b); symmetric in (a, b) bit for bit.
inline log_real log_beta(log_real a, log_real b) {
  detail::require_positive_finite(a, "log_beta");
  detail::require_positive_finite(b, "log_beta");
  return log_gamma(a).value + log_gamma(b).value - log_gamma(a + b).value;
}

/// Constant-free Stirling form ln(e^{-x} x^{x - 1/2}) = -x + (x - 1/2) ln x.
/// Differs from ln Gamma(x) by ln sqrt(2 pi) + O(1/x); diagnostics only.
inline log_real log_gamma_stirling(log_real x) {
  detail::require_positive_finite(x, "log_gamma_stirling");
  return -x + (x - 0.5L) * std::log(x);
}

}  // namespace bergman
