#pragma once

#include <stdexcept>
#include <string>

namespace isingecho {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: length/dimension mismatch, bad qubit index,
// non-Hermitian input, parameters outside a formula's domain.
class InputError : public Error {
 public:
  using Error::Error;
};

// Request exceeds the configured qubit cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Valid request for which no construction exists (e.g. N = 2 closed forms,
// preparation networks beyond N = 3, 4).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// The two-level echo needs a finite gap to the first coupled level.
class DegenerateGapError : public Error {
 public:
  using Error::Error;
};

}  // namespace isingecho
