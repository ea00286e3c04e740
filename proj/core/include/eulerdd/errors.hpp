#pragma once

#include <stdexcept>
#include <string>

namespace eulerdd {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input: file syntax, bad flags, unparsable text.
/// The CLI maps these to exit code 2.
struct InputError : Error {
  using Error::Error;
};

/// A mathematically meaningful precondition was violated
/// (wrong arity, non-monotone input, nonzero Euler characteristic, ...).
/// The CLI maps these to exit code 1.
struct DomainError : Error {
  using Error::Error;
};

}  // namespace eulerdd
