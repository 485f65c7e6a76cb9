#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace procgeo {

/// Raised when an input violates a precondition or a type invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation produces something it cannot continue from.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The iterator produced a non-finite entry at `step`.
class BlowUpError : public NumericalError {
 public:
  BlowUpError(std::size_t step, double last_max_abs)
      : NumericalError("numerical blow-up at step " + std::to_string(step)),
        step_(step),
        last_max_abs_(last_max_abs) {}

  std::size_t step() const noexcept { return step_; }
  /// max|B_ij| of the last finite matrix before the failing step.
  double last_max_abs() const noexcept { return last_max_abs_; }

 private:
  std::size_t step_;
  double last_max_abs_;
};

}  // namespace procgeo
