#pragma once

#include <stdexcept>
#include <string>

namespace rixp {

// Base of every error thrown by the library. The CLI maps all of these to
// exit status 1.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A numeric argument outside its domain (non-finite, out of range, negative).
class InputDomainError : public Error {
public:
  using Error::Error;
};

// A dataset or matrix violating one of its invariants.
class ValidationError : public Error {
public:
  using Error::Error;
};

// Unknown ISO code or model id.
class LookupError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

class IoError : public Error {
public:
  using Error::Error;
};

// Geocoder failures.
class TransportError : public Error {
public:
  using Error::Error;
};

class NotFoundError : public Error {
public:
  using Error::Error;
};

class ProtocolError : public Error {
public:
  using Error::Error;
};

}  // namespace rixp
