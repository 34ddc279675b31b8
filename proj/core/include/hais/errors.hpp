#pragma once

#include <stdexcept>
#include <string>

namespace hais {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent caller-provided data (length mismatches,
/// non-finite coordinates, out-of-range probabilities, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value (non-positive bandwidth, bad threshold, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Index outside the valid range of a container.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A documented invariant was violated (e.g. overlapping instances fed to a
/// stage that requires disjoint inputs).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Synthetic scene generation could not satisfy its constraints.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Filesystem-level failure (unreadable file, unwritable directory).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed text file; carries the 1-based line number of the offense.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, long line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

  long line() const noexcept { return line_; }

 private:
  long line_;
};

}  // namespace hais
