#pragma once

#include <stdexcept>
#include <string>

namespace qest {

/// Base class for all qest errors. CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// QASM syntax or semantic error with source position.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line, int column)
      : Error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line(line),
        column(column) {}

  int line;
  int column;
};

/// A hard resource guard was exceeded (e.g. dense unitary width limit).
class GuardError : public Error {
public:
  using Error::Error;
};

/// Filesystem / serialization failure.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace qest
