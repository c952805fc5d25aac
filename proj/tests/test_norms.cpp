#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <thread>

#include "bergman/enumerate.hpp"
#include "bergman/norms.hpp"

using namespace bergman;
using std::numbers::pi;

namespace {

std::vector<DomainSpec> test_domains() {
  return {DomainSpec::disc(),
          DomainSpec::polydisc(2),
          DomainSpec::polydisc(3),
          DomainSpec::ellipsoid({1, 1}),
          DomainSpec::ellipsoid({2, 3}),
          DomainSpec::ellipsoid({0.5, 2}),
          DomainSpec::ellipsoid({1, 1, 1}),
          DomainSpec::ellipsoid({0.7, 1.5, 2.5})};
}

}  // namespace

TEST(LogCSquared, ClosedFormExamples) {
  EXPECT_NEAR(log_c_squared(DomainSpec::disc(), MultiIndex{0}).log_c_squared, std::log(pi), 1e-15);
  EXPECT_NEAR(log_c_squared(DomainSpec::ellipsoid({1, 1}), MultiIndex{0, 0}).log_c_squared, std::log(pi * pi / 2),
              1e-14);
  EXPECT_NEAR(log_c_squared(DomainSpec::ellipsoid({1, 1}), MultiIndex{1, 0}).log_c_squared, std::log(pi * pi / 6),
              1e-14);
  for (std::uint32_t a1 : {0u, 3u, 17u})
    for (std::uint32_t a2 : {0u, 1u, 40u})
      EXPECT_NEAR(log_c_squared(DomainSpec::polydisc(2), MultiIndex{a1, a2}).log_c_squared,
                  std::log(pi * pi / ((a1 + 1.0) * (a2 + 1.0))), 1e-13);
  // unit ball in C^3: pi^3 / 3!
  EXPECT_NEAR(log_c_squared(DomainSpec::ellipsoid({1, 1, 1}), MultiIndex{0, 0, 0}).log_c_squared,
              std::log(pi * pi * pi / 6), 1e-14);
}

TEST(LogCSquared, BallMomentsMatchFactorialFormula) {
  // On the unit ball of C^n, ||z^g||^2 = pi^n g! / (n + |g|)!.
  const auto ball = DomainSpec::ellipsoid({1, 1, 1});
  for (const auto& g : enumerate_up_to_order(3, 12)) {
    double expected = std::pow(pi, 3) / std::tgamma(4.0 + g.order());
    for (std::size_t j = 0; j < 3; ++j) expected *= std::tgamma(g[j] + 1.0);
    EXPECT_NEAR(log_c_squared(ball, g).log_c_squared, std::log(expected), 1e-12) << g.to_string();
  }
}

TEST(LogCSquared, CrossEncodingConsistency) {
  const auto disc = DomainSpec::disc();
  const auto e1 = DomainSpec::ellipsoid({1});
  const auto p1 = DomainSpec::polydisc(1);
  for (std::uint32_t g = 0; g <= 200; ++g) {
    const MultiIndex gamma{g};
    const double d = log_c_squared(disc, gamma).log_c_squared;
    EXPECT_NEAR(d, log_c_squared(e1, gamma).log_c_squared, 1e-10) << g;
    EXPECT_NEAR(d, log_c_squared(p1, gamma).log_c_squared, 1e-10) << g;
    EXPECT_NEAR(log_ratio(disc, gamma, MultiIndex{3}), log_ratio(e1, gamma, MultiIndex{3}), 1e-12);
  }
}

TEST(LogCSquared, DimensionMismatch) {
  EXPECT_THROW(log_c_squared(DomainSpec::ellipsoid({1, 2}), MultiIndex{1}), usage_error);
  EXPECT_THROW(log_ratio(DomainSpec::disc(), MultiIndex{1}, MultiIndex{1, 1}), usage_error);
}

TEST(LogCSquared, FiniteForHugeIndices) {
  // Gamma(1 + sum) overflows doubles long before this; the log stays finite.
  const auto v = log_c_squared(DomainSpec::ellipsoid({0.5, 2}), MultiIndex{20000, 30000});
  EXPECT_TRUE(std::isfinite(v.log_c_squared));
  EXPECT_LT(v.log_c_squared, -1000);
}

TEST(LogRatio, Examples) {
  for (std::uint32_t g : {0u, 5u, 99u})
    for (std::uint32_t a : {1u, 2u, 7u})
      EXPECT_NEAR(log_ratio(DomainSpec::disc(), MultiIndex{g}, MultiIndex{a}), std::log((g + 1.0) / (g + a + 1.0)),
                  1e-15);
  for (const auto& d : test_domains())
    EXPECT_EQ(log_ratio(d, MultiIndex(d.dimension()), MultiIndex::zero(d.dimension())), 0.0);
  const std::uint32_t N = 40, k = 13, a1 = 2, a2 = 5;
  EXPECT_NEAR(log_ratio(DomainSpec::polydisc(2), MultiIndex{k, N - k}, MultiIndex{a1, a2}),
              std::log((k + 1.0) * (N - k + 1.0) / ((k + 1.0 + a1) * (N - k + 1.0 + a2))), 1e-15);
}

TEST(LogRatio, AgreesWithNormDifferences) {
  for (const auto& d : test_domains()) {
    const std::size_t n = d.dimension();
    for (const auto& g : enumerate_up_to_order(n, n == 3 ? 8 : 20)) {
      for (const auto& a : enumerate_up_to_order(n, 3)) {
        const double via_norms = log_c_squared(d, g + a).log_c_squared - log_c_squared(d, g).log_c_squared;
        ASSERT_NEAR(log_ratio(d, g, a), via_norms, 1e-11) << d.to_string() << " " << g.to_string();
      }
    }
  }
}

TEST(LogCSquared, CauchySchwarz) {
  for (const auto& d : test_domains()) {
    const std::size_t n = d.dimension();
    for (const auto& g : enumerate_up_to_order(n, n == 3 ? 15 : 40)) {
      for (const auto& a : enumerate_up_to_order(n, 4)) {
        if (!g.dominates(a)) continue;
        const double lhs = 2 * log_c_squared(d, g).log_c_squared;
        const double rhs = log_c_squared(d, g - a).log_c_squared + log_c_squared(d, g + a).log_c_squared;
        ASSERT_LE(lhs, rhs + 1e-10) << d.to_string() << " g=" << g.to_string() << " a=" << a.to_string();
      }
    }
  }
}

TEST(LogCSquared, StrictlyDecreasingInEachCoordinate) {
  for (const auto& d : test_domains()) {
    const std::size_t n = d.dimension();
    for (const auto& g : enumerate_up_to_order(n, n == 3 ? 10 : 30))
      for (std::size_t j = 0; j < n; ++j)
        ASSERT_LT(log_c_squared(d, g + MultiIndex::unit(n, j)).log_c_squared, log_c_squared(d, g).log_c_squared)
            << d.to_string() << " " << g.to_string();
  }
}

TEST(NormCache, MemoizesAndRoundTripsThroughFile) {
  NormCache cache;
  const auto d = DomainSpec::ellipsoid({0.5, 2});
  const MultiIndex g{3, 4};
  EXPECT_FALSE(cache.lookup(d, g).has_value());
  const double v = cache.get_or_compute(d, g).log_c_squared;
  EXPECT_EQ(v, log_c_squared(d, g).log_c_squared);
  ASSERT_TRUE(cache.lookup(d, g).has_value());

  const auto path = std::filesystem::temp_directory_path() / "bergman_norm_cache_test.tsv";
  cache.save(path.string());
  {
    std::ofstream out(path, std::ios::app);
    out << "garbage line\n";
    out << "disc\t1,2\t-3\n";         // dimension mismatch
    out << "ellipsoid:1,1\t1,1\tnan\n";  // not finite
    out << "disc\t4\t0.25\n";
  }
  NormCache reloaded;
  EXPECT_EQ(reloaded.load(path.string()), 2u);
  EXPECT_EQ(*reloaded.lookup(d, g), v);  // 17 significant digits round-trip
  EXPECT_EQ(*reloaded.lookup(DomainSpec::disc(), MultiIndex{4}), 0.25);
  std::filesystem::remove(path);
  EXPECT_EQ(NormCache{}.load("/nonexistent/path/cache.tsv"), 0u);
}

TEST(NormCache, ConcurrentAccessIsConsistent) {
  NormCache cache;
  const auto d = DomainSpec::ellipsoid({2, 3});
  std::vector<std::jthread> pool;
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&] {
      for (const auto& g : enumerate_up_to_order(2, 25)) (void)cache.get_or_compute(d, g);
    });
  pool.clear();
  EXPECT_EQ(cache.size(), count_up_to_order(2, 25));
  for (const auto& g : enumerate_up_to_order(2, 25))
    ASSERT_EQ(*cache.lookup(d, g), log_c_squared(d, g).log_c_squared);
}
