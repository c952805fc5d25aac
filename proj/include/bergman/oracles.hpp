#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "bergman/domain.hpp"
#include "bergman/errors.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/summation.hpp"

namespace bergman {

enum class OracleMethod { RadialQuadrature, MonteCarlo };

inline std::string_view to_string(OracleMethod m) {
  return m == OracleMethod::RadialQuadrature ? "RadialQuadrature" : "MonteCarlo";
}

/// Independent estimate of c_gamma^2.
struct OracleEstimate {
  double value = 0;
  /// Summed panel error estimates (quadrature) or three standard errors (Monte Carlo).
  double abs_error = 0;
  OracleMethod method = OracleMethod::RadialQuadrature;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
};

////////////////////////////////////////////////////////////////////////////////
//
// radial quadrature
//
////////////////////////////////////////////////////////////////////////////////

/// c_gamma^2 from the one-dimensional reduced integral.
///
///   disc:            2 pi  int_0^1 r^{2 g + 1} dr
///   ellipsoid(m1,m2): 2 pi^2 / (g2 + 1) int_0^1 r^{2 g1 + 1} (1 - r^{2 m1})^{(g2 + 1)/m2} dr
///
/// Other variants raise capability_error; this oracle covers exactly the cases
/// whose reduction is written out in closed form above.
inline OracleEstimate radial_quadrature_c_squared(const DomainSpec& domain, const MultiIndex& gamma, double tol) {
  domain.require_dimension(gamma, "gamma");
  if (!(tol >= 1e-12)) throw usage_error("quadrature tolerance must be >= 1e-12");

  constexpr double pi = std::numbers::pi;
  double prefactor = 0;
  QuadratureResult q;

  if (domain.as_disc() != nullptr) {
    const double p = 2.0 * gamma[0] + 1.0;
    prefactor = 2.0 * pi;
    q = integrate_adaptive([p](double r) { return std::pow(r, p); }, 0.0, 1.0, tol);
  } else if (const auto* e = domain.as_ellipsoid(); e != nullptr && e->m.size() == 2) {
    const double p = 2.0 * gamma[0] + 1.0;
    const double two_m1 = 2.0 * e->m[0];
    const double q_exp = (gamma[1] + 1.0) / e->m[1];
    prefactor = 2.0 * pi * pi / (gamma[1] + 1.0);
    q = integrate_adaptive(
        [=](double r) {
          if (r <= 0.0) return 0.0;
          // 1 - r^{2 m1} without cancellation near r = 1
          const double gap = -std::expm1(two_m1 * std::log(r));
          if (gap <= 0.0) return 0.0;
          return std::exp(p * std::log(r) + q_exp * std::log(gap));
        },
        0.0, 1.0, tol);
  } else {
    throw capability_error("radial quadrature oracle supports disc and 2-dimensional ellipsoid domains, not " +
                           std::string(domain.kind()) + " (" + domain.to_string() + ")");
  }
  return {prefactor * q.value, prefactor * q.abs_error, OracleMethod::RadialQuadrature, 0, 0};
}

////////////////////////////////////////////////////////////////////////////////
//
// Monte Carlo
//
////////////////////////////////////////////////////////////////////////////////

/// SplitMix64 finalizer; used to derive independent per-block seeds.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Samples per Monte Carlo block. Fixed: part of the reproducibility contract.
inline constexpr std::uint64_t kMonteCarloBlock = 1u << 16;

/// Seed of the std::mt19937_64 stream driving block `block` of a run seeded with `seed`.
inline std::uint64_t monte_carlo_block_seed(std::uint64_t seed, std::uint64_t block) noexcept {
  return splitmix64(seed ^ splitmix64(block));
}

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
inline double unit_interval(std::uint64_t bits) noexcept { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

/// c_gamma^2 by rejection sampling from the unit polydisc.
///
/// Each coordinate is uniform on the unit disc; since every supported domain and
/// integrand depend on z_j only through s_j = |z_j|^2, which is uniform on [0, 1)
/// under that law, the sampler draws s_j directly. Proposals outside the domain
/// count as integrand 0. The sample budget is cut into blocks of
/// kMonteCarloBlock, each driven by std::mt19937_64 seeded with
/// monte_carlo_block_seed(seed, block), and block sums are combined in block
/// order, so the estimate is bit-identical for any worker count.
inline OracleEstimate monte_carlo_c_squared(const DomainSpec& domain, const MultiIndex& gamma, std::uint64_t samples,
                                            std::uint64_t seed, const ExecOptions& opts = {}) {
  domain.require_dimension(gamma, "gamma");
  if (samples < 10000) throw usage_error("Monte Carlo needs at least 10^4 samples");

  const std::size_t n = domain.dimension();
  const Ellipsoid* ellipsoid = domain.as_ellipsoid();
  const std::uint64_t blocks = (samples + kMonteCarloBlock - 1) / kMonteCarloBlock;

  struct BlockSums {
    double sum = 0, sum_sq = 0;
    std::uint64_t accepted = 0;
  };
  std::vector<BlockSums> partial(blocks);

  parallel_for(blocks, opts.resolved_threads(), [&](std::size_t b) {
    std::mt19937_64 rng(monte_carlo_block_seed(seed, b));
    const std::uint64_t count = std::min<std::uint64_t>(kMonteCarloBlock, samples - b * kMonteCarloBlock);
    CompensatedSum sum, sum_sq;
    std::uint64_t accepted = 0;
    std::vector<double> s(n);
    for (std::uint64_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < n; ++j) s[j] = unit_interval(rng());
      if (ellipsoid != nullptr) {
        double level = 0;
        for (std::size_t j = 0; j < n; ++j) level += std::pow(s[j], ellipsoid->m[j]);
        if (!(level < 1.0)) continue;
      }
      double f = 1;
      for (std::size_t j = 0; j < n; ++j)
        if (gamma[j] != 0) f *= std::pow(s[j], static_cast<double>(gamma[j]));
      sum += f;
      sum_sq += f * f;
      ++accepted;
    }
    partial[b] = {sum.value(), sum_sq.value(), accepted};
  });

  CompensatedSum sum, sum_sq;
  std::uint64_t accepted = 0;
  for (const auto& p : partial) {
    sum += p.sum;
    sum_sq += p.sum_sq;
    accepted += p.accepted;
  }
  if (accepted == 0)
    throw degenerate_sampling_error("Monte Carlo accepted no proposals for domain " + domain.to_string());

  const double count = static_cast<double>(samples);
  const double mean = sum.value() / count;
  const double variance = std::max(0.0, (sum_sq.value() - count * mean * mean) / (count - 1));
  const double volume = std::pow(std::numbers::pi, static_cast<double>(n));
  return {volume * mean, 3.0 * volume * std::sqrt(variance / count), OracleMethod::MonteCarlo, samples, seed};
}

}  // namespace bergman
