#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tabalg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidBasis : public Error {
 public:
  using Error::Error;
};

class MalformedElement : public Error {
 public:
  using Error::Error;
};

class UnknownName : public Error {
 public:
  using Error::Error;
};

/// Raised by the text parsers. `line()` is 1-based; 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NotClosed : public Error {
 public:
  using Error::Error;
};

class SizeCapExceeded : public Error {
 public:
  using Error::Error;
};

class RepresentativeDependence : public Error {
 public:
  using Error::Error;
};

class Unverified : public Error {
 public:
  using Error::Error;
};

}  // namespace tabalg
