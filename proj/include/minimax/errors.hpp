#pragma once

#include <stdexcept>
#include <string>

namespace minimax {

/// Malformed or inconsistent caller input (dimensions, invariants, ranges).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A risk oracle produced a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Should be unreachable for valid inputs (e.g. an infeasible game LP).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace minimax
