#pragma once

#include <stdexcept>
#include <string>

namespace jlolab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Input to a Hermitian-only routine was not Hermitian.
class NonHermitian : public Error {
 public:
  using Error::Error;
};

/// An operator had the wrong Z/2 parity for the requested operation.
class ParityError : public Error {
 public:
  using Error::Error;
};

class NotSelfAdjoint : public Error {
 public:
  using Error::Error;
};

class NotIdempotent : public Error {
 public:
  using Error::Error;
};

/// A supertrace that should be an integer was not within tolerance of one.
class NonIntegerIndex : public Error {
 public:
  NonIntegerIndex(const std::string& what, double value) : Error(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// The Chern character pairing did not decay below threshold by the degree cap.
class NonConvergent : public Error {
 public:
  using Error::Error;
};

/// Chain operation would exceed the configured term budget.
class ChainTooLarge : public Error {
 public:
  using Error::Error;
};

class DegreeTooLarge : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace jlolab
