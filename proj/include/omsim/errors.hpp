#pragma once

#include <stdexcept>
#include <string>

namespace omsim {

/// Input violates a documented precondition (bad parameter, malformed config).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Couplings violate G+ < G-; reported as invalid input, not as a dynamical instability.
class CouplingInstabilityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The linear dynamics are not contracting (Hurwitz or Floquet test failed).
class UnstableModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: divergence, non-convergence, singular system, step underflow.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace omsim
