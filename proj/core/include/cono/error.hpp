#pragma once

#include <stdexcept>
#include <string>

namespace cono {

/// Caller supplied arguments that violate a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative numerical routine failed to converge or left its valid range.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The request is well-formed but outside what the implementation supports
/// (e.g. a biconjugate in dimension 3).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No feasible fixed action exists for a trace.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cono
