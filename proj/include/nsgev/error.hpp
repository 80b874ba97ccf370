#pragma once

#include <stdexcept>
#include <string>

namespace nsgev {

// Base of every error the library throws. The CLI maps any Error to exit 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class OrderingError : public ParseError {
 public:
  using ParseError::ParseError;
};

class DataSizeError : public Error {
 public:
  using Error::Error;
};

class ExtrapolationError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

class StratificationError : public Error {
 public:
  using Error::Error;
};

class InversionError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace nsgev
