#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roughga {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header/schema mismatch or malformed schema description.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Malformed data row; carries the 1-based line number of the offending row.
class RowError : public Error {
 public:
  RowError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An argument outside its documented domain (k < 2, empty attribute subset, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A cell value outside its attribute's domain.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent configuration, e.g. consistency checks requested on a schema
/// without gravidity/parity columns.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operation invoked on an object in the wrong state (unevaluated fitness).
class StateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A library invariant was found violated at run time.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace roughga
