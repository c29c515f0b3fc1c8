#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fpu {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates the documented precondition of an operation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Vector or state length does not match the owning system.
class DimensionMismatch : public Error {
 public:
  DimensionMismatch(const std::string& what, std::size_t expected,
                    std::size_t got)
      : Error(what + ": expected dimension " + std::to_string(expected) +
              ", got " + std::to_string(got)),
        expected_(expected),
        got_(got) {}

  std::size_t expected() const { return expected_; }
  std::size_t got() const { return got_; }

 private:
  std::size_t expected_;
  std::size_t got_;
};

/// Two eigenvalues could not be separated, so mode labels would be ambiguous.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

/// The forcing-square pattern is not one-pair-to-one-pair.
class PatternViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Line numbers are 1-based; 0 means "unknown".
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& message)
      : Error(source + (line > 0 ? ":" + std::to_string(line) : "") + ": " +
              message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace fpu
