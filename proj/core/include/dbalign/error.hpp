#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dbalign {

/// A parameter violated an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data that is well-formed but unusable (e.g. a zero-norm row).
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed to reach its requested tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Malformed text input. line() is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace dbalign
