#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gfalm {

/// Raised for invalid arguments: bad grid shapes, mismatched fields, inadmissible parameters.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iteration produces a state the theory rules out (non-finite
/// values, collapse of the L^{p+1} norm, energy increase under an admissible alpha).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::int64_t iteration)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
        message_(what),
        iteration_(iteration) {}

  std::int64_t iteration() const noexcept { return iteration_; }
  /// The description without the iteration suffix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::int64_t iteration_;
};

/// Iterative eigensolver or root finder did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gfalm
