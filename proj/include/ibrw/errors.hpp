#pragma once

#include <stdexcept>
#include <string>

namespace ibrw {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A user-supplied object violates one of its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Unreadable or malformed input document.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Some scale λ·n is not an integer while strict times are requested.
class NonIntegralTime : public Error {
 public:
  using Error::Error;
};

/// The logarithmic barrier is only defined on the effective time set.
class BarrierUndefined : public Error {
 public:
  using Error::Error;
};

class RestrictionViolated : public Error {
 public:
  using Error::Error;
};

/// The requested population exceeds the particle cap.
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

/// The first effective segment does not lie strictly below its hull.
class AssumptionViolated : public Error {
 public:
  using Error::Error;
};

}  // namespace ibrw
