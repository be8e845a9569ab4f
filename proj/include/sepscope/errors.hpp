#pragma once

#include <stdexcept>
#include <string>

namespace sepscope {

/// Raised for malformed or out-of-contract input (bad dimensions, non-Hermitian
/// matrices, index sets outside the basis). The CLI maps these to exit status 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidDimension : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class DimensionMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A point handed to the barrier lies on or outside the search region.
class BoundaryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative numerics failed to converge or lost positive definiteness.
/// The CLI maps these to exit status 3.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The epsilon-net enumeration would exceed its evaluation cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sepscope
