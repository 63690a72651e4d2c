#pragma once

#include <stdexcept>
#include <string>

namespace primecoh {

// Precondition violations on caller-supplied arguments.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Eigensolver breakdown, eigenvalues outside the PSD slack, residual blow-up.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too few usable points for a fit or a statistic.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace primecoh
