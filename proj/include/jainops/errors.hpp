#pragma once

#include <stdexcept>
#include <string>

namespace jainops {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Jain weight mass 1 - eps not reached before the truncation ceiling.
class TruncationCapExceeded : public Error {
 public:
  using Error::Error;
};

/// A moment or weighted integral diverges for the requested parameters.
class DivergentIntegral : public Error {
 public:
  using Error::Error;
};

class QuadratureNoConvergence : public Error {
 public:
  using Error::Error;
};

/// n too small for the requested closed-form moment.
class InsufficientN : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

/// A second central moment came out non-positive.
class SandwichViolated : public Error {
 public:
  using Error::Error;
};

}  // namespace jainops
