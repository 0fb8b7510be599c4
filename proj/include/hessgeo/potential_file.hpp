#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "hessgeo/chart.hpp"
#include "hessgeo/errors.hpp"

namespace hessgeo {

/// Potential files are "key: value" lines; '#' starts a comment.
///
///   name: hyperbolic2
///   dimension: 2
///   variables: x, y
///   potential: x^2/(8*y) - 0.25*log(y)
///   domain: y               (repeatable; each expression must stay > 0)
///   point: 0.5, 1.0         (repeatable; explicit samples)
///   box: -1 1, 0.2 3        (lo hi per coordinate)
///   count: 20
///   seed: 42
///
/// Either points or a box must be given. dimension is optional when
/// variables are listed.
struct PotentialFile {
  std::string origin;  // path or "<input>"
  std::string name;
  std::vector<std::string> variables;
  std::string potential;
  std::vector<std::string> domain;
  std::vector<Point> points;
  std::optional<Box> box;
  int count = 20;
  std::uint64_t seed = 42;

  PotentialChart chart() const;

  /// Explicit points when present, otherwise `count` admissible points drawn
  /// from the box with mt19937_64(seed). A count override draws from the box
  /// even when explicit points exist, if there is a box.
  std::vector<Point> samples(std::optional<int> count_override = {},
                             std::optional<std::uint64_t> seed_override = {}) const;
};

/// A malformed file: 1-based line and column.
class FileError : public Error {
 public:
  FileError(std::string origin, int line, int column, const std::string& message)
      : Error(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses and validates: expressions are parsed, explicit points must be
/// admissible. Throws FileError.
PotentialFile parse_potential_file(std::string_view text, std::string origin = "<input>");

PotentialFile load_potential_file(const std::string& path);

}  // namespace hessgeo
