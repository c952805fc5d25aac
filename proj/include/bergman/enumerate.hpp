#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "bergman/domain.hpp"
#include "bergman/errors.hpp"

namespace bergman {

/// binomial(n, k) in 64 bits; throws usage_error on overflow.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i is exact at every step
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(r, i);
    const std::uint64_t rr = r / g, ii = i / g;
    if (rr > std::numeric_limits<std::uint64_t>::max() / (num / ii))
      throw usage_error("binomial coefficient overflows 64 bits");
    r = rr * (num / ii);
  }
  return r;
}

/// Number of gamma in N^n with |gamma| = order.
inline std::uint64_t count_of_order(std::size_t n, std::uint64_t order) {
  if (n == 0) throw usage_error("dimension must be >= 1");
  return binomial(order + n - 1, n - 1);
}

/// Number of gamma in N^n with |gamma| <= order.
inline std::uint64_t count_up_to_order(std::size_t n, std::uint64_t order) {
  if (n == 0) throw usage_error("dimension must be >= 1");
  return binomial(order + n, n);
}

/// Walks the compositions of a fixed order into n parts in lexicographic order,
/// starting at (0,...,0,order) and ending at (order,0,...,0).
class OrderEnumerator {
public:
  OrderEnumerator(std::size_t n, std::uint32_t order) : current_(n), order_(order) {
    if (n == 0) throw usage_error("dimension must be >= 1");
    current_[n - 1] = order;
  }

  /// Positions the walk at the given lexicographic rank (0-based).
  OrderEnumerator(std::size_t n, std::uint32_t order, std::uint64_t rank) : current_(n), order_(order) {
    if (n == 0) throw usage_error("dimension must be >= 1");
    if (rank >= count_of_order(n, order)) throw usage_error("rank out of range");
    std::uint32_t remaining = order;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      std::uint32_t v = 0;
      while (true) {
        const std::uint64_t block = count_of_order(n - j - 1, remaining - v);
        if (rank < block) break;
        rank -= block;
        ++v;
      }
      current_[j] = v;
      remaining -= v;
    }
    current_[n - 1] = remaining;
  }

  const MultiIndex& current() const noexcept { return current_; }
  std::uint32_t order() const noexcept { return order_; }

  /// Advances to the lexicographic successor; returns false past the last element.
  bool next() {
    const std::size_t n = current_.size();
    if (n == 1) return false;
    // tail holds the sum of entries strictly right of j
    std::uint32_t tail = current_[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) {
      if (tail > 0) {
        current_[j] += 1;
        for (std::size_t i = j + 1; i + 1 < n; ++i) current_[i] = 0;
        current_[n - 1] = tail - 1;
        return true;
      }
      tail += current_[j];
    }
    return false;
  }

private:
  MultiIndex current_;
  std::uint32_t order_;
};

/// Every gamma with |gamma| = order, lexicographically increasing.
inline std::vector<MultiIndex> enumerate_order(std::size_t n, std::uint32_t order) {
  std::vector<MultiIndex> out;
  out.reserve(count_of_order(n, order));
  OrderEnumerator it(n, order);
  do out.push_back(it.current());
  while (it.next());
  return out;
}

/// Concatenation of enumerate_order(n, k) for k = 0..order.
inline std::vector<MultiIndex> enumerate_up_to_order(std::size_t n, std::uint32_t order) {
  std::vector<MultiIndex> out;
  out.reserve(count_up_to_order(n, order));
  for (std::uint32_t k = 0; k <= order; ++k) {
    OrderEnumerator it(n, k);
    do out.push_back(it.current());
    while (it.next());
  }
  return out;
}

}  // namespace bergman
