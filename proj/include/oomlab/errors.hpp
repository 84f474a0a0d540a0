#pragma once

#include <stdexcept>
#include <string>

namespace oomlab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad shapes, out-of-range parameters, failed model conditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A word contains a symbol outside the model's alphabet.
class UnknownSymbolError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The model produced a probability below -neg_tol, i.e. it is not a valid OOM.
class InvalidModelError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed a size guard.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An experiment's precondition does not hold; the experiment refuses to run.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Model or experiment file could not be read or does not match its schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace oomlab
