#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tpsig {

// Base class for every exception thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// p is not a prime number.
struct NonPrimeError : Error {
  using Error::Error;
};

// p^m exceeds the supported field size (2^31).
struct FieldTooLargeError : Error {
  using Error::Error;
};

// A user-supplied modulus or generator fails validation (wrong shape,
// reducible modulus, non-primitive generator).
struct BadModulusError : Error {
  using Error::Error;
};

// Discrete logarithm or multiplicative character evaluated at zero.
struct ZeroArgumentError : Error {
  using Error::Error;
};

// Two signals (or a signal and its declared period) disagree in length.
struct PeriodMismatchError : Error {
  using Error::Error;
};

// A signal violates the unit-norm requirement; carries the offender.
struct UnitNormError : Error {
  UnitNormError(std::uint32_t index_, double norm_, const std::string& what_)
      : Error(what_), index(index_), norm(norm_) {}
  std::uint32_t index;
  double norm;
};

// Bridge transforms require lambda < 1 - 1e-9 (distinct expanded signals).
struct DegenerateLambdaError : Error {
  using Error::Error;
};

// e fails the divisibility / range requirements of the cyclotomic splitting.
struct BadDivisorError : Error {
  using Error::Error;
};

// A numerical check contradicted the identity it verifies.
struct VerificationFailedError : Error {
  using Error::Error;
};

// lambda^2 falls outside every validity interval of a piecewise bound.
struct IntervalGapError : Error {
  using Error::Error;
};

// Power parameter k outside the feasible range of the bound family.
struct KOutOfRangeError : Error {
  using Error::Error;
};

// Input JSON is malformed or violates the signal-set schema.
struct SchemaError : Error {
  using Error::Error;
};

}  // namespace tpsig
