#pragma once

#include <stdexcept>
#include <string>

namespace force {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input text did not conform to one of the document grammars.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column),
        message_(message) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

// A structure, formula or spec does not match the signature it is used with.
class SignatureError : public Error {
 public:
  using Error::Error;
};

// An input violates a documented precondition (e.g. universe smaller than the
// variable budget of its sort).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The exhaustive oracle refused an instance larger than its configured guard.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace force
