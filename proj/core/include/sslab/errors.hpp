#pragma once

#include <stdexcept>
#include <string>

namespace sslab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation (p <= 1, alpha <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inputs are inconsistent with each other (mismatched grids, bad sizes, unknown keys).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold for the supplied data.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (step-size underflow, eigensolver failure, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace sslab
