#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace adv2e {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration rejected by validate_config(); carries every violated constraint.
class InvalidConfig : public Error {
 public:
  explicit InvalidConfig(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class InvalidFactor : public Error {
 public:
  using Error::Error;
};

class InvalidWindow : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Input-side failures. The CLI maps everything deriving from IoError to exit code 2.
class IoError : public Error {
 public:
  using Error::Error;
};

class MissingFile : public IoError {
 public:
  using IoError::IoError;
};

class GeometryMismatch : public IoError {
 public:
  using IoError::IoError;
};

class NonMonotonicTimestamps : public IoError {
 public:
  using IoError::IoError;
};

class ParseError : public IoError {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class BoundsError : public IoError {
 public:
  using IoError::IoError;
};

class BadMagic : public IoError {
 public:
  using IoError::IoError;
};

class TruncatedFile : public IoError {
 public:
  using IoError::IoError;
};

/// Raised when produced data breaks a documented invariant (a bug, not bad input).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace adv2e
