#pragma once

#include <stdexcept>
#include <string>

namespace circlebench {

/// Base of everything the workbench throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A map or homeomorphism spec is ill-formed, or two maps are incompatible.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON input. The message carries the offending field or position.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A configured depth, cell, or work cap would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// The monotone root solver could not bracket its target.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// An increment fell below the numeric floor, so a ratio is meaningless.
class ResolutionExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace circlebench
