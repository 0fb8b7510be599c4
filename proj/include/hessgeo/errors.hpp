#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hessgeo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : Error("parse error at offset " + std::to_string(offset) + ": " + message),
        offset_(offset),
        detail_(message) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
};

/// log/sqrt of a non-positive argument, division by zero, or a non-finite result.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& subexpression, const std::string& why)
      : Error("domain error in '" + subexpression + "': " + why), subexpression_(subexpression) {}

  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

class UnsupportedSignatureError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid problem setup, e.g. a solve window outside the cone.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Solver divergence, quadrature failure and similar.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hessgeo
