#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bergman/gamma.hpp"

using namespace bergman;

namespace {

struct Reference {
  std::string x_text;
  log_real x;
  log_real ln_gamma;
};

std::vector<Reference> load_reference() {
  std::ifstream in(std::string(BERGMAN_TEST_DATA_DIR) + "/lgamma_reference.tsv");
  std::vector<Reference> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string xs = line.substr(0, tab), ys = line.substr(tab + 1);
    out.push_back({xs, std::strtold(xs.c_str(), nullptr), std::strtold(ys.c_str(), nullptr)});
  }
  return out;
}

}  // namespace

TEST(LogGamma, MatchesHighPrecisionFixture) {
  const auto refs = load_reference();
  ASSERT_GE(refs.size(), 30u);
  for (const auto& r : refs) {
    const LogGammaValue v = log_gamma(r.x);
    const double err = static_cast<double>(std::abs(v.value - r.ln_gamma));
    EXPECT_LE(err, 1e-12) << "x=" << r.x_text;
    EXPECT_LE(err, v.abs_error_bound + 1e-15) << "reported bound too small at x=" << r.x_text;
    if (r.x >= 0.5L) {
      EXPECT_LE(v.abs_error_bound, 1e-12) << "x=" << r.x_text;
    }
  }
}

TEST(LogGamma, SpecExamples) {
  EXPECT_EQ(log_gamma(1.0).value, 0.0L);
  EXPECT_NEAR(static_cast<double>(log_gamma(0.5).value), 0.5723649429247001, 1e-15);
  EXPECT_NEAR(static_cast<double>(log_gamma(11.0).value), std::log(3628800.0), 1e-13);
}

TEST(LogGamma, Recurrence) {
  for (double x : {0.5, 1.3, 7.7, 42.0, 500.0}) {
    const log_real lhs = log_gamma(x + 1).value;
    const log_real rhs = std::log(static_cast<log_real>(x)) + log_gamma(x).value;
    EXPECT_LE(static_cast<double>(std::abs(lhs - rhs)), 1e-12) << x;
  }
}

TEST(LogGamma, DomainErrors) {
  EXPECT_THROW(log_gamma(0.0), domain_error);
  EXPECT_THROW(log_gamma(-1.5), domain_error);
  EXPECT_THROW(log_gamma(std::nan("")), domain_error);
  EXPECT_THROW(log_gamma(INFINITY), domain_error);
  EXPECT_THROW(log_gamma(kLogGammaMaxArgument * 2), domain_error);
  EXPECT_NO_THROW(log_gamma(kLogGammaMaxArgument));
}

TEST(LogBeta, ValuesAndSymmetry) {
  EXPECT_NEAR(static_cast<double>(log_beta(1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(log_beta(2, 3)), std::log(1.0 / 12.0), 1e-14);
  EXPECT_NEAR(static_cast<double>(log_beta(0.5, 0.5)), std::log(std::numbers::pi), 1e-14);
  for (double a : {0.3, 1.7, 25.0})
    for (double b : {0.9, 4.2, 300.5}) EXPECT_EQ(log_beta(a, b), log_beta(b, a));
  EXPECT_THROW(log_beta(0, 1), domain_error);
}

TEST(LogGammaStirling, ShapeMatchesExactUpToConstant) {
  EXPECT_EQ(log_gamma_stirling(1.0), -1.0L);
  const log_real offset = 0.5L * std::log(2 * std::numbers::pi_v<long double>);
  const auto shifted_exact = [&](double x) { return log_gamma(x).value - offset; };
  const log_real at100 = shifted_exact(100);
  EXPECT_LE(std::abs(log_gamma_stirling(100) - at100) / std::abs(at100), 0.01L);
  // remainder ~ 1/(12 x): shrinks as x grows
  log_real previous = INFINITY;
  for (double x : {10.0, 30.0, 100.0, 300.0, 1000.0}) {
    const log_real err = std::abs(log_gamma_stirling(x) - shifted_exact(x));
    EXPECT_LT(err, previous) << x;
    EXPECT_NEAR(static_cast<double>(err), 1.0 / (12 * x), 1.0 / (300 * x * x * x) + 1e-15);
    previous = err;
  }
  EXPECT_THROW(log_gamma_stirling(0), domain_error);
}
