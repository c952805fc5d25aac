#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "bergman/domain.hpp"
#include "bergman/enumerate.hpp"

namespace bergman {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      compensation_ += (sum_ - t) + x;
    else
      compensation_ += (x - t) + sum_;
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + compensation_; }

private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Worker cap for the parallel kernels. Results never depend on it.
struct ExecOptions {
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Terms per block; part of the reduction contract, so changing it may change the last bits.
  std::size_t block_size = 4096;

  unsigned resolved_threads() const noexcept {
    if (threads != 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }
};

/// Runs task(i) for i in [0, count) on up to `threads` workers.
/// The first exception thrown by any task is rethrown on the caller.
template <typename Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task) {
  threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = cursor.fetch_add(1); i < count; i = cursor.fetch_add(1)) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        cursor.store(count);
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

/// Sums term(gamma) over the order levels [first_order, last_order] of N^n.
///
/// Each level is cut into fixed-size slices of its lexicographic enumeration;
/// slices are summed serially and combined level-major, slice-minor with one
/// compensated accumulator. Returns the running total after each level, so
/// result[k - first_order] is bit-identical to a run with last_order = k,
/// independent of the worker count.
template <typename Term>
std::vector<double> level_prefix_sums(std::size_t n, std::uint32_t first_order, std::uint32_t last_order,
                                      Term&& term, const ExecOptions& opts = {}) {
  struct Slice {
    std::uint32_t order;
    std::uint64_t rank;
    std::uint64_t length;
  };
  std::vector<Slice> slices;
  std::vector<std::size_t> level_end;  // one past the last slice of each level
  const std::uint64_t block = std::max<std::size_t>(1, opts.block_size);
  for (std::uint32_t k = first_order; k <= last_order; ++k) {
    const std::uint64_t count = count_of_order(n, k);
    for (std::uint64_t r = 0; r < count; r += block) slices.push_back({k, r, std::min(block, count - r)});
    level_end.push_back(slices.size());
    if (k == last_order) break;  // guards last_order == UINT32_MAX
  }

  std::vector<double> partial(slices.size());
  parallel_for(slices.size(), opts.resolved_threads(), [&](std::size_t i) {
    const Slice& s = slices[i];
    OrderEnumerator it(n, s.order, s.rank);
    CompensatedSum acc;
    for (std::uint64_t t = 0; t < s.length; ++t) {
      acc += term(it.current());
      it.next();
    }
    partial[i] = acc.value();
  });

  std::vector<double> prefix;
  prefix.reserve(level_end.size());
  CompensatedSum total;
  std::size_t i = 0;
  for (std::size_t end : level_end) {
    for (; i < end; ++i) total += partial[i];
    prefix.push_back(total.value());
  }
  return prefix;
}

}  // namespace bergman
