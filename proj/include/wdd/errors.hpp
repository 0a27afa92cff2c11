#pragma once

#include <stdexcept>
#include <string>

namespace wdd {

// Bad input or violated precondition. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The inputs are valid but the numerics cannot produce a value
// (divergent integral, missing bracket). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoBracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace wdd
