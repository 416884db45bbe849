#pragma once

#include <stdexcept>
#include <string>

namespace facial {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied value violates an operation's precondition or a
// guardrail. The CLI maps this to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed. Either the implementation is wrong
// or a mathematical claim the library relies on was refuted. The CLI maps
// this to exit code 2.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Interval evaluation could not separate two tower values even at the
// maximum configured precision.
class AmbiguousComparison : public Error {
 public:
  using Error::Error;
};

}  // namespace facial
