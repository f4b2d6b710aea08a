#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aptrisk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed caller input: bad flags, bad experiment files, bad grids.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// The model data violates an invariant (graph shape, parameters, dimensions).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A text input could not be parsed. Carries the 1-based line number.
class ParseError : public ModelError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ModelError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The integrator produced a non-finite state; usually the step is too large.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace aptrisk
