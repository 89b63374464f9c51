#pragma once

#include <stdexcept>
#include <string>

namespace bimod {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or algebras do not fit together.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A structure violates one of its axioms (associativity, unit, intertwining...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its domain (e.g. a resolution for a non-generator).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An intermediate space exceeded the configured dimension cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace bimod
