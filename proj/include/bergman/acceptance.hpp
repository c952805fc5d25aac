#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bergman/divergence.hpp"
#include "bergman/enumerate.hpp"
#include "bergman/hankel.hpp"
#include "bergman/io.hpp"
#include "bergman/norms.hpp"
#include "bergman/oracles.hpp"

namespace bergman::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  /// Worst observed quantity and counts, one line.
  std::string detail;
  double seconds = 0;
  double budget_seconds = 0;
  /// Checks passed and elapsed time within budget.
  bool ok() const { return passed && seconds <= budget_seconds; }
};

/// The (m, alpha) grid shared by the ellipsoid criteria.
inline std::vector<std::vector<double>> ellipsoid_exponents() { return {{1, 1}, {2, 3}, {0.5, 2}}; }
inline std::vector<MultiIndex> ellipsoid_alphas() { return {{1, 0}, {0, 1}, {1, 1}, {2, 1}}; }

/// Domains of the nonnegativity and telescoping properties.
inline std::vector<DomainSpec> property_domains() {
  return {DomainSpec::disc(),
          DomainSpec::polydisc(2),
          DomainSpec::polydisc(3),
          DomainSpec::ellipsoid({1, 1}),
          DomainSpec::ellipsoid({2, 3}),
          DomainSpec::ellipsoid({0.5, 2}),
          DomainSpec::ellipsoid({1, 1, 1}),
          DomainSpec::ellipsoid({1.5, 0.75, 3})};
}

namespace detail {

inline std::string fmt(double v) { return io::format_human(v); }

template <typename Body>
CriterionResult timed(int id, std::string title, double budget, Body body) {
  CriterionResult r{id, std::move(title), false, {}, 0, budget};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline MultiIndex random_index(std::mt19937_64& rng, std::size_t n, std::uint32_t max_order, bool nonzero) {
  while (true) {
    const std::uint32_t order = std::uniform_int_distribution<std::uint32_t>(nonzero ? 1 : 0, max_order)(rng);
    const std::uint64_t count = count_of_order(n, order);
    const std::uint64_t rank = std::uniform_int_distribution<std::uint64_t>(0, count - 1)(rng);
    OrderEnumerator it(n, order, rank);
    if (!nonzero || order > 0) return it.current();
  }
}

}  // namespace detail

inline CriterionResult disc_exactness(const ExecOptions& opts = {}) {
  return detail::timed(1, "disc S_alpha at N=1e5 lies in [alpha-1e-3, alpha]", 1.0, [&](CriterionResult& r) {
    bool ok = true;
    std::ostringstream d;
    for (std::uint32_t a : {1u, 2u, 3u, 5u}) {
      const double v = s_alpha_partial(DomainSpec::disc(), MultiIndex{a}, 100000, opts).value;
      ok = ok && v >= a - 1e-3 && v <= a;
      d << "alpha=" << a << ":" << io::format_machine(v) << " ";
    }
    r.passed = ok;
    r.detail = d.str();
  });
}

inline CriterionResult polydisc_lower_bound(const ExecOptions& opts = {}) {
  return detail::timed(2, "polydisc(2) diagonal sum for alpha=(1,1) is >= N/15", 1.0, [&](CriterionResult& r) {
    bool ok = true;
    double worst = INFINITY;
    for (std::uint32_t N : {300u, 600u, 1200u, 2400u}) {
      const double v = diagonal_sum(DomainSpec::polydisc(2), MultiIndex{1, 1}, N, opts).value;
      ok = ok && v >= N / 15.0;
      worst = std::min(worst, v / (N / 15.0));
    }
    r.passed = ok;
    r.detail = "min value/(N/15) = " + detail::fmt(worst);
  });
}

inline CriterionResult ellipsoid_linear_divergence(const ExecOptions& opts = {}) {
  return detail::timed(3, "ellipsoid diagonal traces 200..6400 diverge linearly", 30.0, [&](CriterionResult& r) {
    const auto grid = io::parse_grid("200:6400:x1.41421356237");
    bool ok = true;
    double min_r2 = INFINITY, min_ratio = INFINITY, max_ratio = -INFINITY;
    int diverging = 0, cases = 0;
    for (const auto& m : ellipsoid_exponents())
      for (const auto& a : ellipsoid_alphas()) {
        const auto d = DomainSpec::ellipsoid(m);
        const auto trace = diagonal_trace(d, a, grid, opts);
        const auto fit = divergence_fit(trace);
        const double ratio = trace.points.back().value / diagonal_sum(d, a, 3200, opts).value;
        ++cases;
        if (fit.verdict == DivergenceVerdict::DivergesLinearly) ++diverging;
        ok = ok && fit.verdict == DivergenceVerdict::DivergesLinearly && fit.r_squared >= 0.99 && ratio >= 1.85 &&
             ratio <= 2.15;
        min_r2 = std::min(min_r2, fit.r_squared);
        min_ratio = std::min(min_ratio, ratio);
        max_ratio = std::max(max_ratio, ratio);
      }
    r.passed = ok;
    r.detail = std::to_string(diverging) + "/" + std::to_string(cases) + " DivergesLinearly, min R^2 " +
               detail::fmt(min_r2) + ", doubling ratio in [" + detail::fmt(min_ratio) + ", " + detail::fmt(max_ratio) +
               "]";
  });
}

inline CriterionResult partial_dominates_diagonal(const ExecOptions& opts = {}) {
  return detail::timed(4, "S_alpha partial sum >= diagonal sum - 1e-9", 5.0, [&](CriterionResult& r) {
    bool ok = true;
    double worst = INFINITY;
    for (const auto& m : ellipsoid_exponents())
      for (const auto& a : ellipsoid_alphas()) {
        const auto d = DomainSpec::ellipsoid(m);
        const auto trace = s_alpha_trace(d, a, {50, 100, 200}, opts);
        for (const auto& p : trace.points) {
          const double gap = p.value - diagonal_sum(d, a, p.N, opts).value;
          ok = ok && gap >= -1e-9;
          worst = std::min(worst, gap);
        }
      }
    r.passed = ok;
    r.detail = "min S - diagonal = " + detail::fmt(worst);
  });
}

inline CriterionResult telescoping_nonnegativity(const ExecOptions& opts = {}, std::uint64_t seed = 20240517) {
  return detail::timed(5, "telescoping check >= -1e-9 on 100 random cases", 5.0, [&](CriterionResult& r) {
    std::mt19937_64 rng(seed);
    const auto domains = property_domains();
    bool ok = true;
    double worst = INFINITY;
    for (int i = 0; i < 100; ++i) {
      const auto& d = domains[std::uniform_int_distribution<std::size_t>(0, domains.size() - 1)(rng)];
      const MultiIndex a = detail::random_index(rng, d.dimension(), 4, true);
      const std::uint32_t N = std::uniform_int_distribution<std::uint32_t>(1, 40)(rng);
      const double t = telescoping_check(d, a, N, opts);
      ok = ok && t >= -1e-9;
      worst = std::min(worst, t);
    }
    r.passed = ok;
    r.detail = "min value " + detail::fmt(worst);
  });
}

inline CriterionResult closed_form_vs_oracles(const ExecOptions& opts = {}, std::uint64_t seed = 7) {
  return detail::timed(6, "closed-form norms match quadrature (1e-8) and Monte Carlo (3 sigma)", 120.0,
                       [&](CriterionResult& r) {
    std::mt19937_64 rng(seed);
    const std::vector<std::vector<double>> exps = {{1, 1},   {2, 3},   {0.5, 2}, {1.5, 0.75},
                                                   {3, 0.5}, {0.7, 1.3}, {2.5, 2.5}};
    int quad_ok = 0;
    double worst_rel = 0;
    for (int i = 0; i < 30; ++i) {
      const auto d = DomainSpec::ellipsoid(exps[i % exps.size()]);
      const MultiIndex g = detail::random_index(rng, 2, 30, false);
      const double exact = log_c_squared(d, g).c_squared();
      const double q = radial_quadrature_c_squared(d, g, 1e-11).value;
      const double rel = std::abs(q / exact - 1);
      worst_rel = std::max(worst_rel, rel);
      if (rel <= 1e-8) ++quad_ok;
    }

    struct McCase {
      DomainSpec d;
      MultiIndex g;
    };
    const std::vector<McCase> mc_cases = {
        {DomainSpec::ellipsoid({1, 1}), {0, 0}},         {DomainSpec::ellipsoid({2, 3}), {1, 0}},
        {DomainSpec::ellipsoid({0.5, 2}), {1, 1}},       {DomainSpec::polydisc(2), {2, 1}},
        {DomainSpec::ellipsoid({1.5, 0.75}), {0, 2}},    {DomainSpec::ellipsoid({1, 1, 1}), {1, 0, 0}},
        {DomainSpec::ellipsoid({2, 1, 0.5}), {0, 1, 1}}, {DomainSpec::polydisc(3), {1, 1, 1}},
        {DomainSpec::ellipsoid({1, 2, 3}), {0, 0, 0}},   {DomainSpec::ellipsoid({0.75, 1.5, 1}), {2, 0, 1}},
    };
    int mc_ok = 0;
    double worst_sigma = 0;
    for (std::size_t i = 0; i < mc_cases.size(); ++i) {
      const auto& c = mc_cases[i];
      const double exact = log_c_squared(c.d, c.g).c_squared();
      const auto e = monte_carlo_c_squared(c.d, c.g, 10'000'000, seed + i, opts);
      const double sigmas = 3 * std::abs(e.value - exact) / e.abs_error;
      worst_sigma = std::max(worst_sigma, sigmas);
      if (sigmas <= 3) ++mc_ok;
    }

    int covered = 0;
    const auto cov_domain = DomainSpec::ellipsoid({2, 3});
    const MultiIndex cov_gamma{1, 1};
    const double cov_exact = log_c_squared(cov_domain, cov_gamma).c_squared();
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto e = monte_carlo_c_squared(cov_domain, cov_gamma, 200'000, 1000 + s, opts);
      if (std::abs(e.value - cov_exact) <= e.abs_error) ++covered;
    }

    r.passed = quad_ok == 30 && mc_ok == 10 && covered >= 47;
    r.detail = "quadrature " + std::to_string(quad_ok) + "/30 (max rel " + detail::fmt(worst_rel) +
               "), Monte Carlo " + std::to_string(mc_ok) + "/10 (max " + detail::fmt(worst_sigma) +
               " sigma), coverage " + std::to_string(covered) + "/50";
  });
}

inline CriterionResult ball_volume_gate(const ExecOptions& opts = {}, std::uint64_t seed = 31) {
  return detail::timed(7, "ellipsoid(1,1,1) at gamma=0 equals pi^3/6 within 3 sigma", 30.0, [&](CriterionResult& r) {
    const auto d = DomainSpec::ellipsoid({1, 1, 1});
    const double target = std::pow(std::numbers::pi, 3) / 6;
    const double closed = log_c_squared(d, MultiIndex{0, 0, 0}).c_squared();
    const auto e = monte_carlo_c_squared(d, MultiIndex{0, 0, 0}, 10'000'000, seed, opts);
    r.passed = std::abs(e.value - target) <= e.abs_error && std::abs(closed / target - 1) <= 1e-14;
    r.detail = "closed form " + io::format_machine(closed) + ", Monte Carlo " + io::format_machine(e.value) +
               " +- " + detail::fmt(e.abs_error) + ", pi^3/6 = " + io::format_machine(target);
  });
}

inline CriterionResult gram_oracle_equivalence(std::uint64_t seed = 11) {
  return detail::timed(8, "row norms match the Gram oracle on 20 cases", 30.0, [&](CriterionResult& r) {
    std::mt19937_64 rng(seed);
    const std::vector<DomainSpec> domains = {DomainSpec::disc(), DomainSpec::ellipsoid({1, 1}),
                                             DomainSpec::ellipsoid({2, 3}), DomainSpec::ellipsoid({0.5, 2}),
                                             DomainSpec::ellipsoid({1.5, 0.75})};
    int agree = 0;
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
      const auto& d = domains[i % domains.size()];
      const MultiIndex g = detail::random_index(rng, d.dimension(), 20, false);
      const MultiIndex a = detail::random_index(rng, d.dimension(), 4, true);
      const double exact = hankel_row_norm_squared(d, g, a);
      const auto o = gram_oracle_row_norm_squared(d, g, a);
      const double tolerance = o.abs_error + 1e-12 * std::max(1.0, std::abs(exact));
      const double excess = std::abs(exact - o.value) / tolerance;
      worst = std::max(worst, excess);
      if (excess <= 1) ++agree;
    }
    r.passed = agree == 20;
    r.detail = std::to_string(agree) + "/20 agree, max |diff|/tolerance " + detail::fmt(worst);
  });
}

inline CriterionResult row_norm_nonnegativity() {
  return detail::timed(9, "row norms >= -1e-12 before clamping (|gamma|<=40, |alpha|<=4)", 10.0,
                       [&](CriterionResult& r) {
    double worst = INFINITY;
    std::uint64_t evaluated = 0;
    for (const auto& d : property_domains()) {
      const std::size_t n = d.dimension();
      const auto alphas = enumerate_up_to_order(n, 4);
      for (std::uint32_t order = 0; order <= 40; ++order)
        for (OrderEnumerator it(n, order);;) {
          for (const auto& a : alphas) {
            worst = std::min(worst, hankel_row_norm_squared_raw(d, it.current(), a));
            ++evaluated;
          }
          if (!it.next()) break;
        }
    }
    r.passed = worst >= -kRowNormClamp;
    r.detail = std::to_string(evaluated) + " row norms, min " + detail::fmt(worst);
  });
}

inline CriterionResult dirichlet_identity(std::uint64_t seed = 3) {
  return detail::timed(10, "disc Dirichlet identity on 20 random polynomials", 5.0, [&](CriterionResult& r) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-2, 2);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
      SymbolCoefficients f(1);
      const std::uint32_t degree = std::uniform_int_distribution<std::uint32_t>(0, 10)(rng);
      for (std::uint32_t k = 0; k <= degree; ++k) f.add(MultiIndex{k}, {coef(rng), coef(rng)});
      const auto c = disc_dirichlet_check(f);
      worst = std::max(worst, std::abs(c.hs_limit - c.dirichlet_over_pi));
    }
    r.passed = worst <= 1e-10;
    r.detail = "max |difference| " + detail::fmt(worst);
  });
}

inline CriterionResult stirling_diagnostic() {
  return detail::timed(11, "Stirling ratio within 10% of exact at N=6000, central band", 5.0,
                       [&](CriterionResult& r) {
    constexpr std::uint32_t N = 6000;
    double worst = 0;
    for (const auto& m : ellipsoid_exponents())
      for (const auto& a : ellipsoid_alphas()) {
        const auto d = DomainSpec::ellipsoid(m);
        for (std::uint32_t k = N / 3; k <= 2 * N / 3; k += 50) {
          const MultiIndex g{k, N - k};
          const double exact = std::exp(log_ratio(d, g, a));
          worst = std::max(worst, std::abs(stirling_ratio_approx(d, g, a) / exact - 1));
        }
      }
    r.passed = worst <= 0.1;
    r.detail = "max |approx/exact - 1| " + detail::fmt(worst);
  });
}

/// Every criterion in order.
inline std::vector<CriterionResult> run_all(const ExecOptions& opts = {}) {
  return {disc_exactness(opts),
          polydisc_lower_bound(opts),
          ellipsoid_linear_divergence(opts),
          partial_dominates_diagonal(opts),
          telescoping_nonnegativity(opts),
          closed_form_vs_oracles(opts),
          ball_volume_gate(opts),
          gram_oracle_equivalence(),
          row_norm_nonnegativity(),
          dirichlet_identity(),
          stirling_diagnostic()};
}

/// "PASS [ 3] title (1.23 s / 30 s) detail"
inline std::string summary_line(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof(head), "%s [%2d] ", r.ok() ? "PASS" : "FAIL", r.id);
  char timing[64];
  std::snprintf(timing, sizeof(timing), " (%.3g s / %.3g s) ", r.seconds, r.budget_seconds);
  return head + r.title + timing + r.detail;
}

}  // namespace bergman::acceptance
