#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace smoothcert {

// Base class for every error raised by the library. Callers that sample
// many instances (the checker, the estimator) catch this type and count the
// sample as skipped.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  DimensionError(std::string_view op, std::size_t lhs, std::size_t rhs)
      : Error(std::string(op) + ": dimension mismatch (" + std::to_string(lhs) +
              " vs " + std::to_string(rhs) + ")"),
        lhs_dim(lhs),
        rhs_dim(rhs) {}

  std::size_t lhs_dim;
  std::size_t rhs_dim;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

// Point outside a function's domain box (or inside its excluded ball).
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::size_t coord)
      : Error(what), coordinate(coord) {}

  std::size_t coordinate;
};

// Point too close to the box edge for a central finite difference.
class BoundaryError : public Error {
 public:
  BoundaryError(const std::string& what, std::size_t coord)
      : Error(what), coordinate(coord) {}

  std::size_t coordinate;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t pos, const std::string& msg)
      : Error("at column " + std::to_string(pos + 1) + ": " + msg),
        position(pos) {}

  std::size_t position;
};

}  // namespace smoothcert
