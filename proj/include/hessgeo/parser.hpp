#pragma once

#include <span>
#include <string>
#include <string_view>

#include "hessgeo/expr.hpp"

namespace hessgeo {

/// Parses `source` against the grammar
///
///   expr     := term (("+"|"-") term)*
///   term     := factor (("*"|"/") factor)*
///   factor   := ("-")? atom ("^" rational)?
///   atom     := number | identifier | function "(" expr ")" | "(" expr ")"
///   function := log | exp | sqrt | sin | cos | abs
///   rational := integer | "(" integer "/" integer ")"
///
/// Identifiers resolve to the index of the matching entry of `variables`.
/// Throws ParseError with the byte offset of the problem.
Expression parse(std::string_view source, std::span<const std::string> variables);

}  // namespace hessgeo
