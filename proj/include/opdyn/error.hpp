#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opdyn {

// Bad argument values (non-finite inputs, dimension mismatch, out-of-range parameters).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A structural precondition of the operation does not hold (e.g. an asymmetric
// influence matrix passed to the Lyapunov certificate).
class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Integration produced a non-finite value.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double time)
      : std::runtime_error(what + " (t=" + std::to_string(time) + ")"), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

// Malformed edge-list / label / config input. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace opdyn
