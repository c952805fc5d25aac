#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bergman/domain.hpp"
#include "bergman/enumerate.hpp"
#include "bergman/errors.hpp"
#include "bergman/norms.hpp"
#include "bergman/oracles.hpp"
#include "bergman/summation.hpp"

namespace bergman {

////////////////////////////////////////////////////////////////////////////////
//
// types
//
////////////////////////////////////////////////////////////////////////////////

/// Finitely many Taylor coefficients f_alpha of a holomorphic symbol f.
class SymbolCoefficients {
public:
  using coefficient_type = std::complex<double>;

  explicit SymbolCoefficients(std::size_t dimension) : dimension_(dimension) {
    if (dimension == 0) throw usage_error("symbol dimension must be >= 1");
  }

  /// Adds c to the coefficient of z^alpha; zero results are not stored.
  SymbolCoefficients& add(const MultiIndex& alpha, coefficient_type c) {
    if (alpha.size() != dimension_)
      throw usage_error("symbol term " + alpha.to_string() + " does not have dimension " + std::to_string(dimension_));
    if (!(std::isfinite(c.real()) && std::isfinite(c.imag())))
      throw usage_error("symbol coefficient of " + alpha.to_string() + " is not finite");
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) it->second += c;
    if (it->second == coefficient_type{}) terms_.erase(it);
    return *this;
  }

  std::size_t dimension() const noexcept { return dimension_; }
  const std::map<MultiIndex, coefficient_type>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  /// Reads lines "g1,...,gn<TAB>re<TAB>im"; the imaginary column may be omitted.
  /// Blank lines and lines starting with '#' are skipped.
  static SymbolCoefficients parse(std::istream& in, std::optional<std::size_t> dimension = std::nullopt) {
    std::optional<SymbolCoefficients> out;
    if (dimension) out.emplace(*dimension);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      std::vector<std::string_view> fields;
      std::string_view rest(line);
      for (auto tab = rest.find('\t'); ; tab = rest.find('\t')) {
        fields.push_back(rest.substr(0, tab));
        if (tab == std::string_view::npos) break;
        rest.remove_prefix(tab + 1);
      }
      if (fields.size() < 2 || fields.size() > 3)
        throw usage_error("symbol line " + std::to_string(line_no) + ": expected 'g1,...,gn<TAB>re[<TAB>im]'");
      const MultiIndex alpha = MultiIndex::parse(fields[0]);
      const double re = detail::parse_double(fields[1], line);
      const double im = fields.size() == 3 ? detail::parse_double(fields[2], line) : 0.0;
      if (!out) out.emplace(alpha.size());
      out->add(alpha, {re, im});
    }
    if (!out) throw usage_error("symbol input contains no terms and no dimension was given");
    return *std::move(out);
  }

  static SymbolCoefficients parse(const std::string& text, std::optional<std::size_t> dimension = std::nullopt) {
    std::istringstream in(text);
    return parse(in, dimension);
  }

private:
  std::size_t dimension_;
  std::map<MultiIndex, coefficient_type> terms_;
};

enum class SeriesKind { PartialSum, DiagonalSum };

inline std::string_view to_string(SeriesKind k) { return k == SeriesKind::PartialSum ? "PartialSum" : "DiagonalSum"; }

struct SeriesPoint {
  std::uint32_t N = 0;
  double value = 0;
};

/// Values of a truncated series at increasing truncation orders N.
struct SeriesTrace {
  std::vector<SeriesPoint> points;
  MultiIndex alpha;
  std::string domain_key;
  SeriesKind kind = SeriesKind::PartialSum;
};

/// Rounding slack below zero that row norms are clamped from; anything lower is an error.
inline constexpr double kRowNormClamp = 1e-12;

namespace detail {

inline void require_increasing(const std::vector<std::uint32_t>& grid) {
  if (grid.empty()) throw usage_error("truncation grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1]) throw usage_error("truncation grid must be strictly increasing");
}

// c_{g+a}^2/c_g^2 - c_g^2/c_{g-a}^2 before clamping; second term is 0 unless g >= a.
inline double row_norm_raw(const DomainSpec& domain, const MultiIndex& gamma, const MultiIndex& alpha) {
  const auto a = alpha.entries();
  const log_real up = log_ratio_at(domain, [&](std::size_t j) { return gamma[j]; }, a);
  bool dominates = true;
  for (std::size_t j = 0; j < a.size(); ++j) dominates = dominates && gamma[j] >= a[j];
  if (!dominates) return static_cast<double>(std::exp(up));
  const log_real down = log_ratio_at(domain, [&](std::size_t j) { return gamma[j] - a[j]; }, a);
  // e^up - e^down = e^down (e^{up - down} - 1)
  return static_cast<double>(std::exp(down) * std::expm1(up - down));
}

inline double clamp_row_norm(double raw, const MultiIndex& gamma, const MultiIndex& alpha) {
  if (raw >= 0) return raw;
  if (raw >= -kRowNormClamp) return 0;
  throw numerical_error("Hankel row norm at gamma=" + gamma.to_string() + ", alpha=" + alpha.to_string() +
                        " is negative beyond rounding: " + std::to_string(raw));
}

}  // namespace detail

////////////////////////////////////////////////////////////////////////////////
//
// single Hankel rows
//
////////////////////////////////////////////////////////////////////////////////

/// ||H_{conj(z^alpha)}(z^gamma / c_gamma)||^2 before the rounding clamp.
inline double hankel_row_norm_squared_raw(const DomainSpec& domain, const MultiIndex& gamma,
                                          const MultiIndex& alpha) {
  domain.require_dimension(gamma, "gamma");
  domain.require_dimension(alpha, "alpha");
  return detail::row_norm_raw(domain, gamma, alpha);
}

/// c_{gamma+alpha}^2 / c_gamma^2 - c_gamma^2 / c_{gamma-alpha}^2, the second term
/// read as 0 when gamma does not dominate alpha. Values in [-1e-12, 0) are
/// clamped to 0; anything lower throws numerical_error.
inline double hankel_row_norm_squared(const DomainSpec& domain, const MultiIndex& gamma, const MultiIndex& alpha) {
  return detail::clamp_row_norm(hankel_row_norm_squared_raw(domain, gamma, alpha), gamma, alpha);
}

struct RowNormEstimate {
  double value = 0;
  double abs_error = 0;
};

/// The same row norm from the Gram expansion
///   ||conj(z)^alpha z^gamma - lambda z^{gamma-alpha}||^2 / c_gamma^2
///     = (c_{gamma+alpha}^2 - 2 lambda c_gamma^2 + lambda^2 c_{gamma-alpha}^2) / c_gamma^2,
/// lambda = c_gamma^2 / c_{gamma-alpha}^2 (0 unless gamma >= alpha), with every c^2
/// taken from the radial quadrature oracle. abs_error propagates the oracle errors.
inline RowNormEstimate gram_oracle_row_norm_squared(const DomainSpec& domain, const MultiIndex& gamma,
                                                    const MultiIndex& alpha, double tol = 1e-12) {
  domain.require_dimension(gamma, "gamma");
  domain.require_dimension(alpha, "alpha");
  if (alpha.is_zero()) return {0, 0};

  const OracleEstimate up = radial_quadrature_c_squared(domain, gamma + alpha, tol);
  const OracleEstimate mid = radial_quadrature_c_squared(domain, gamma, tol);
  const double e_up = up.abs_error / up.value, e_mid = mid.abs_error / mid.value;

  if (!gamma.dominates(alpha)) {
    const double value = up.value / mid.value;
    return {value, value * (e_up + e_mid) + 4 * std::numeric_limits<double>::epsilon() * value};
  }
  const OracleEstimate down = radial_quadrature_c_squared(domain, gamma - alpha, tol);
  const double e_down = down.abs_error / down.value;
  const double lambda = mid.value / down.value;
  const double gram = up.value - 2 * lambda * mid.value + lambda * lambda * down.value;
  const double value = gram / mid.value;
  // first-order propagation: value = A - B with A = up/mid, B = mid/down
  const double a = up.value / mid.value, b = mid.value / down.value;
  const double err = a * (e_up + e_mid) + b * (2 * e_mid + e_down) +
                     16 * std::numeric_limits<double>::epsilon() * (a + b);
  return {value, err};
}

/// Coefficient and index of P(conj(z)^beta z^gamma) = c_gamma^2 / c_{gamma-beta}^2 z^{gamma-beta}.
struct ProjectedMonomial {
  double coefficient = 0;
  std::optional<MultiIndex> index;
};

inline ProjectedMonomial bergman_project_monomial(const DomainSpec& domain, const MultiIndex& beta,
                                                  const MultiIndex& gamma) {
  domain.require_dimension(beta, "beta");
  domain.require_dimension(gamma, "gamma");
  if (!gamma.dominates(beta)) return {0, std::nullopt};
  MultiIndex base = gamma - beta;
  const double coefficient = static_cast<double>(std::exp(log_ratio_extended(domain, base, beta)));
  return {coefficient, std::move(base)};
}

////////////////////////////////////////////////////////////////////////////////
//
// series
//
////////////////////////////////////////////////////////////////////////////////

/// Partial sums of S_alpha over |gamma| <= N for every N in the grid.
inline SeriesTrace s_alpha_trace(const DomainSpec& domain, const MultiIndex& alpha,
                                 const std::vector<std::uint32_t>& grid, const ExecOptions& opts = {}) {
  domain.require_dimension(alpha, "alpha");
  detail::require_increasing(grid);
  SeriesTrace trace{{}, alpha, domain.to_string(), SeriesKind::PartialSum};
  std::vector<double> prefix(grid.back() + 1, 0.0);
  if (!alpha.is_zero()) {
    prefix = level_prefix_sums(
        domain.dimension(), 0, grid.back(),
        [&](const MultiIndex& gamma) { return detail::clamp_row_norm(detail::row_norm_raw(domain, gamma, alpha), gamma, alpha); },
        opts);
  }
  for (std::uint32_t N : grid) trace.points.push_back({N, prefix[N]});
  return trace;
}

/// S_alpha truncated to |gamma| <= N, compensated sum in canonical order.
inline SeriesPoint s_alpha_partial(const DomainSpec& domain, const MultiIndex& alpha, std::uint32_t N,
                                   const ExecOptions& opts = {}) {
  return s_alpha_trace(domain, alpha, {N}, opts).points.front();
}

/// sum over |gamma| = N of c_{gamma+alpha}^2 / c_gamma^2.
inline SeriesPoint diagonal_sum(const DomainSpec& domain, const MultiIndex& alpha, std::uint32_t N,
                                const ExecOptions& opts = {}) {
  domain.require_dimension(alpha, "alpha");
  const auto a = alpha.entries();
  const auto v = level_prefix_sums(
      domain.dimension(), N, N,
      [&](const MultiIndex& gamma) {
        return static_cast<double>(std::exp(detail::log_ratio_at(domain, [&](std::size_t j) { return gamma[j]; }, a)));
      },
      opts);
  return {N, v.front()};
}

inline SeriesTrace diagonal_trace(const DomainSpec& domain, const MultiIndex& alpha,
                                  const std::vector<std::uint32_t>& grid, const ExecOptions& opts = {}) {
  detail::require_increasing(grid);
  SeriesTrace trace{{}, alpha, domain.to_string(), SeriesKind::DiagonalSum};
  for (std::uint32_t N : grid) trace.points.push_back(diagonal_sum(domain, alpha, N, opts));
  return trace;
}

/// sum_{|gamma| < N} c_{gamma+alpha}^2/c_gamma^2 - sum_{|gamma| <= N, gamma >= alpha} c_gamma^2/c_{gamma-alpha}^2.
///
/// Every negative term cancels an earlier positive one, so the exact value is
/// the sum of the surviving ratios over N - |alpha| < |gamma| < N and is >= 0.
inline double telescoping_check(const DomainSpec& domain, const MultiIndex& alpha, std::uint32_t N,
                                const ExecOptions& opts = {}) {
  domain.require_dimension(alpha, "alpha");
  if (alpha.is_zero()) throw usage_error("telescoping_check requires a nonzero alpha");
  if (N == 0) throw usage_error("telescoping_check requires N >= 1");
  const auto a = alpha.entries();
  const auto v = level_prefix_sums(
      domain.dimension(), 0, N,
      [&](const MultiIndex& gamma) {
        double term = 0;
        if (gamma.order() < N)
          term += static_cast<double>(std::exp(detail::log_ratio_at(domain, [&](std::size_t j) { return gamma[j]; }, a)));
        bool dominates = true;
        for (std::size_t j = 0; j < a.size(); ++j) dominates = dominates && gamma[j] >= a[j];
        if (dominates)
          term -= static_cast<double>(
              std::exp(detail::log_ratio_at(domain, [&](std::size_t j) { return gamma[j] - a[j]; }, a)));
        return term;
      },
      opts);
  return v.back();
}

/// sum over stored alpha != 0 of |f_alpha|^2 times the S_alpha partial sum at N.
inline double hs_norm_squared_partial(const DomainSpec& domain, const SymbolCoefficients& f, std::uint32_t N,
                                      const ExecOptions& opts = {}) {
  if (f.dimension() != domain.dimension())
    throw usage_error("symbol dimension " + std::to_string(f.dimension()) + " does not match domain " +
                      domain.to_string());
  CompensatedSum total;
  for (const auto& [alpha, c] : f.terms()) {
    if (alpha.is_zero()) continue;
    total += std::norm(c) * s_alpha_partial(domain, alpha, N, opts).value;
  }
  return total.value();
}

/// Both sides of the disc identity sum_alpha alpha |f_alpha|^2 = (1/pi) int_D |f'|^2 dA.
struct DirichletCheck {
  /// sum_alpha |f_alpha|^2 S_alpha with the disc limit S_alpha = alpha.
  double hs_limit = 0;
  /// (1/pi) sum_alpha alpha^2 |f_alpha|^2 c_{alpha-1}^2, the Dirichlet integral of f
  /// expanded in the orthogonal monomials z^{alpha-1} of f'.
  double dirichlet_over_pi = 0;
};

inline DirichletCheck disc_dirichlet_check(const SymbolCoefficients& f) {
  if (f.dimension() != 1) throw usage_error("disc_dirichlet_check needs a one-variable symbol");
  const DomainSpec disc = DomainSpec::disc();
  CompensatedSum hs, dirichlet;
  for (const auto& [alpha, c] : f.terms()) {
    const double a = alpha[0];
    if (a == 0) continue;
    hs += a * std::norm(c);
    const double c2 = log_c_squared(disc, MultiIndex{alpha[0] - 1}).c_squared();
    dirichlet += a * a * std::norm(c) * c2;
  }
  return {hs.value(), dirichlet.value() / std::numbers::pi};
}

/// Central-band Stirling approximation of c_{gamma+alpha}^2 / c_gamma^2 on a
/// 2-dimensional ellipsoid at gamma = (k, N-k):
///   (k/m1)^{a1/m1} ((N-k)/m2)^{a2/m2} / (k/m1 + (N-k)/m2)^{a1/m1 + a2/m2}.
/// Requires N/3 <= k <= 2N/3 and every Gamma argument above 10.
inline double stirling_ratio_approx(const DomainSpec& domain, const MultiIndex& gamma, const MultiIndex& alpha) {
  const Ellipsoid* e = domain.as_ellipsoid();
  if (e == nullptr || e->m.size() != 2)
    throw usage_error("stirling_ratio_approx needs a 2-dimensional ellipsoid, got " + domain.to_string());
  domain.require_dimension(gamma, "gamma");
  domain.require_dimension(alpha, "alpha");
  const double k = gamma[0], rest = gamma[1], N = k + rest;
  if (3 * k < N || 3 * k > 2 * N)
    throw usage_error("stirling_ratio_approx: gamma=" + gamma.to_string() + " lies outside the band N/3 <= k <= 2N/3");
  const double m1 = e->m[0], m2 = e->m[1];
  if ((k + 1) / m1 <= 10 || (rest + 1) / m2 <= 10)
    throw usage_error("stirling_ratio_approx: N too small for the asymptotic regime (Gamma arguments must exceed 10)");
  const double p1 = alpha[0] / m1, p2 = alpha[1] / m2;
  const double x1 = k / m1, x2 = rest / m2;
  return std::exp(p1 * std::log(x1) + p2 * std::log(x2) - (p1 + p2) * std::log(x1 + x2));
}

/// S_{e_j} partial sums for every coordinate j (reported 1-based). The canonical
/// dbar-solution operator on (0,1)-forms with holomorphic coefficients is the sum of
/// the Hankel operators with symbols conj(z_j), so growth of any entry rules out
/// the Hilbert-Schmidt property.
inline std::vector<std::pair<std::size_t, double>> dbar_solution_hs_diagnostic(const DomainSpec& domain,
                                                                               std::uint32_t N,
                                                                               const ExecOptions& opts = {}) {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t j = 0; j < domain.dimension(); ++j)
    out.emplace_back(j + 1, s_alpha_partial(domain, MultiIndex::unit(domain.dimension(), j), N, opts).value);
  return out;
}

}  // namespace bergman
