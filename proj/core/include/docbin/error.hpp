#pragma once

#include <stdexcept>
#include <string>

namespace docbin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs whose shapes disagree (mismatched dims, inconsistent grid metadata,
/// malformed subband sets).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A precondition on argument values was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A metric is mathematically undefined for the given pair.
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

/// File decode/encode failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace docbin
