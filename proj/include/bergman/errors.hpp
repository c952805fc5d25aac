#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

/// Root of every exception thrown by the library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatch, bad flag, unparsable text, violated precondition.
class usage_error : public error {
public:
  using error::error;
};

/// Argument outside the mathematical domain of a function (e.g. log_gamma at x <= 0).
class domain_error : public error {
public:
  using error::error;
};

/// The requested method does not support the given domain variant.
class capability_error : public error {
public:
  using error::error;
};

/// Adaptive refinement exhausted its budget; carries the best estimate reached.
class accuracy_error : public error {
public:
  accuracy_error(const std::string& what, double best_estimate, double abs_error)
      : error(what), best_estimate_(best_estimate), abs_error_(abs_error) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double abs_error() const noexcept { return abs_error_; }

private:
  double best_estimate_;
  double abs_error_;
};

/// Monte Carlo run in which no proposal landed inside the domain.
class degenerate_sampling_error : public error {
public:
  using error::error;
};

/// A quantity that must be nonnegative came out below the rounding clamp.
class numerical_error : public error {
public:
  using error::error;
};

}  // namespace bergman
