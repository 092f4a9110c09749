#pragma once

#include <stdexcept>
#include <string>

namespace mascope {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

class InfeasibilityError : public Error {
 public:
  using Error::Error;
};

class DegeneracyError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An assumption check (mixing matrix, schedule connectivity, ...) failed.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A runtime diagnostic invariant was violated, e.g. a feasible surrogate
/// that left the constraint intersection.
class DiagnosticsError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mascope
