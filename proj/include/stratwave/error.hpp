#pragma once

#include <stdexcept>
#include <string>

namespace stratwave {

// Bad user input: malformed config, invalid profiles, inconsistent grids.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed (integrator, root finder, linear solve).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The flow reached the stagnation/ellipticity boundary.
class StagnationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace stratwave
