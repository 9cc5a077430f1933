#pragma once

#include <stdexcept>
#include <string>

namespace bgwr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Malformed input file. Carries the offending line when known (1-based, 0 = none).
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// X^T W X is rank deficient or numerically singular at a location.
class SingularSystemError : public Error {
public:
  SingularSystemError(std::string location, const std::string& detail)
      : Error("singular weighted system at location '" + location + "': " + detail),
        location_(std::move(location)) {}

  const std::string& location() const noexcept { return location_; }

private:
  std::string location_;
};

}  // namespace bgwr
