#pragma once

#include <stdexcept>
#include <string>

namespace digestlab {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract input data (files, matrices, sheets).
class InputError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration (factor ranges, thresholds, flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An iterative routine exhausted its iteration budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A quantity is undefined for the given input (e.g. ECV with no loadings).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

}  // namespace digestlab
