#pragma once

#include <stdexcept>
#include <string>

namespace mixcs {

// Bad arguments, malformed inputs, violated preconditions. The CLI maps
// these to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A closed-form bound whose denominator vanishes or turns negative.
class SingularityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Numerical failures discovered while solving (rank deficiency, LP
// breakdown). The CLI maps these to exit code 2.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mixcs
