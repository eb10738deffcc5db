#pragma once

#include <stdexcept>
#include <string>

namespace ballslep {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid numeric parameters (orders, dimensions, Jacobi indices, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A point outside the set where a function or limit is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid input: bad configuration, non low-pass shapes.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite matrix entries and similar corrupted input data.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Raised when a computed spectrum violates its a-priori bounds, which
/// means the quadrature did not resolve the Gram matrix.
class NumericalQualityError : public Error {
 public:
  using Error::Error;
};

}  // namespace ballslep
