#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace percbound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: bad model id, malformed space, out-of-range parameter.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Power iteration did not settle within its iteration budget.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Matrix construction would exceed the configured memory budget.
class MemoryBudgetExceeded : public Error {
 public:
  MemoryBudgetExceeded(const std::string& what, std::size_t row_reached)
      : Error(what), row_reached_(row_reached) {}

  std::size_t row_reached() const noexcept { return row_reached_; }

 private:
  std::size_t row_reached_;
};

/// Integer coefficient overflow in polynomial arithmetic.
class CoefficientOverflow : public Error {
 public:
  using Error::Error;
};

/// A condition that well-formed inputs can never produce.
class InternalInvariant : public Error {
 public:
  using Error::Error;
};

/// An instance too large for an exhaustive oracle.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace percbound
