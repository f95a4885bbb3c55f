#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace optisketch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or precondition violation (zero dimensions, bad ratio, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes do not agree.
class DimensionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A vector handed to the optical device was not strictly {0,1}.
class NonBinaryInputError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number of the offending line.
class ParseError : public IoError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : IoError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Numerical breakdown: rank collapse in the range finder, failed calibration.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class RankCollapseError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CalibrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace optisketch
