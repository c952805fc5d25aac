#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>

#include "bergman/domain.hpp"
#include "bergman/gamma.hpp"

namespace bergman {

/// ln c_gamma^2, where c_gamma^2 is the integral of |z^gamma|^2 over the domain.
struct LogNormValue {
  double log_c_squared = 0;

  double c_squared() const { return std::exp(log_c_squared); }
};

namespace detail {

inline constexpr log_real kLogPi = 1.144729885849400174143427351353058711647L;

// ln c^2 at the multi-index whose j-th entry is entry(j).
template <typename Entry>
log_real log_c_squared_at(const DomainSpec& domain, Entry&& entry) {
  const std::size_t n = domain.dimension();
  if (const auto* e = domain.as_ellipsoid()) {
    log_real total = n * kLogPi;
    log_real shifted_sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const log_real mj = e->m[j];
      const log_real a = (static_cast<log_real>(entry(j)) + 1) / mj;
      total += log_gamma(a).value - std::log(mj);
      shifted_sum += a;
    }
    return total - log_gamma(1 + shifted_sum).value;
  }
  // disc and polydisc: product of pi / (gamma_j + 1)
  log_real total = 0;
  for (std::size_t j = 0; j < n; ++j) total += kLogPi - std::log(static_cast<log_real>(entry(j)) + 1);
  return total;
}

// ln(c_{b+alpha}^2 / c_b^2) with b given through base(j), as one expression of
// log-Gamma differences; coordinates with alpha_j = 0 contribute exactly zero.
template <typename Entry>
log_real log_ratio_at(const DomainSpec& domain, Entry&& base, std::span<const MultiIndex::value_type> alpha) {
  const std::size_t n = domain.dimension();
  log_real total = 0;
  if (const auto* e = domain.as_ellipsoid()) {
    log_real a_sum = 0, step_sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const log_real mj = e->m[j];
      const log_real a = (static_cast<log_real>(base(j)) + 1) / mj;
      a_sum += a;
      if (alpha[j] == 0) continue;
      const log_real b = (static_cast<log_real>(base(j)) + alpha[j] + 1) / mj;
      step_sum += static_cast<log_real>(alpha[j]) / mj;
      total += log_gamma(b).value - log_gamma(a).value;
    }
    if (step_sum == 0) return 0;
    return total - (log_gamma(1 + a_sum + step_sum).value - log_gamma(1 + a_sum).value);
  }
  for (std::size_t j = 0; j < n; ++j)
    if (alpha[j] != 0) total -= std::log1p(static_cast<log_real>(alpha[j]) / (static_cast<log_real>(base(j)) + 1));
  return total;
}

}  // namespace detail

/// ln c_gamma^2 on the given domain.
///
///   disc / polydisc(n):  sum_j ln(pi / (gamma_j + 1))
///   ellipsoid(m):        n ln pi - sum_j ln m_j + sum_j lnGamma((gamma_j+1)/m_j)
///                        - lnGamma(1 + sum_j (gamma_j+1)/m_j)
inline LogNormValue log_c_squared(const DomainSpec& domain, const MultiIndex& gamma) {
  domain.require_dimension(gamma, "gamma");
  const auto v = detail::log_c_squared_at(domain, [&](std::size_t j) { return gamma[j]; });
  return {static_cast<double>(v)};
}

/// ln(c_{gamma+alpha}^2 / c_gamma^2), never formed by subtracting two norms.
inline log_real log_ratio_extended(const DomainSpec& domain, const MultiIndex& gamma, const MultiIndex& alpha) {
  domain.require_dimension(gamma, "gamma");
  domain.require_dimension(alpha, "alpha");
  return detail::log_ratio_at(domain, [&](std::size_t j) { return gamma[j]; }, alpha.entries());
}

inline double log_ratio(const DomainSpec& domain, const MultiIndex& gamma, const MultiIndex& alpha) {
  return static_cast<double>(log_ratio_extended(domain, gamma, alpha));
}

/// Thread-safe memo of ln c_gamma^2 keyed by (canonical domain string, gamma).
///
/// Optional file form, one record per line:
///   domainkey<TAB>g1,g2,...,gn<TAB>log_c_squared
/// Lines that do not parse are dropped and recomputed on demand.
class NormCache {
public:
  static constexpr const char* kEnvironmentVariable = "BERGMAN_NORM_CACHE";

  LogNormValue get_or_compute(const DomainSpec& domain, const MultiIndex& gamma) {
    const std::string key = make_key(domain.to_string(), gamma.to_string());
    {
      std::shared_lock lock(mutex_);
      if (auto it = entries_.find(key); it != entries_.end()) return {it->second};
    }
    const LogNormValue v = log_c_squared(domain, gamma);
    std::unique_lock lock(mutex_);
    entries_[key] = v.log_c_squared;
    return v;
  }

  std::optional<double> lookup(const DomainSpec& domain, const MultiIndex& gamma) const {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(make_key(domain.to_string(), gamma.to_string())); it != entries_.end())
      return it->second;
    return std::nullopt;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }

  /// Merges records from a cache file; returns the number of records accepted.
  std::size_t load(const std::string& path) {
    std::ifstream in(path);
    if (!in) return 0;
    std::size_t accepted = 0;
    std::string line;
    std::unique_lock lock(mutex_);
    while (std::getline(in, line)) {
      const auto t1 = line.find('\t');
      const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
      if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) continue;
      try {
        const DomainSpec domain = DomainSpec::parse(std::string_view(line).substr(0, t1));
        const MultiIndex gamma = MultiIndex::parse(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
        if (gamma.size() != domain.dimension()) continue;
        const double v = detail::parse_double(std::string_view(line).substr(t2 + 1), line);
        if (!std::isfinite(v)) continue;
        entries_[make_key(domain.to_string(), gamma.to_string())] = v;
        ++accepted;
      } catch (const error&) {
        continue;
      }
    }
    return accepted;
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw usage_error("cannot write norm cache file '" + path + "'");
    std::shared_lock lock(mutex_);
    char buf[64];
    for (const auto& [key, value] : entries_) {
      std::snprintf(buf, sizeof(buf), "%.17g", value);
      out << key << '\t' << buf << '\n';
    }
  }

  /// Path named by BERGMAN_NORM_CACHE, if set and nonempty.
  static std::optional<std::string> environment_path() {
    const char* p = std::getenv(kEnvironmentVariable);
    if (p == nullptr || *p == '\0') return std::nullopt;
    return std::string(p);
  }

private:
  static std::string make_key(const std::string& domain_key, const std::string& gamma_key) {
    return domain_key + '\t' + gamma_key;
  }

  mutable std::shared_mutex mutex_;
  std::map<std::string, double> entries_;
};

}  // namespace bergman
