#pragma once

#include <stdexcept>
#include <string>

namespace ewn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A case or config file is missing, unreadable, or malformed.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Series or matrix lengths disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure inside a solver, or an optimization that should never
/// be infeasible turned out to be.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Physical or model parameter outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

}  // namespace ewn
