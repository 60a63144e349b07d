#pragma once

#include <stdexcept>
#include <string>

namespace kreach {

/// Base for all library errors. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad dimensions, non-finite values, invalid parameters or configs.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written, or its contents are corrupt.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed (e.g. a factorization that should never fail did).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace kreach
