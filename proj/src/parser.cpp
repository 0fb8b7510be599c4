#include "hessgeo/parser.hpp"

#include <cctype>
#include <charconv>
#include <optional>

#include "hessgeo/errors.hpp"

namespace hessgeo {

namespace {

std::optional<NodeKind> lookup_function(std::string_view name) {
  if (name == "log") return NodeKind::kLog;
  if (name == "exp") return NodeKind::kExp;
  if (name == "sqrt") return NodeKind::kSqrt;
  if (name == "sin") return NodeKind::kSin;
  if (name == "cos") return NodeKind::kCos;
  if (name == "abs") return NodeKind::kAbs;
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view src, std::span<const std::string> variables) : src_(src), vars_(variables) {}

  Expression parse_all() {
    Expression e = parse_expr();
    skip_space();
    if (pos_ != src_.size()) fail(std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_, message); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& message) const { throw ParseError(at, message); }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' but reached end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expression parse_expr() {
    std::vector<Expression> terms;
    terms.push_back(parse_term());
    while (true) {
      if (accept('+')) {
        terms.push_back(parse_term());
      } else if (accept('-')) {
        terms.push_back(negate(parse_term()));
      } else {
        break;
      }
    }
    return add(std::move(terms));
  }

  Expression parse_term() {
    Expression acc = parse_factor();
    while (true) {
      if (accept('*')) {
        acc = acc * parse_factor();
      } else if (accept('/')) {
        acc = divide(acc, parse_factor());
      } else {
        return acc;
      }
    }
  }

  Expression parse_factor() {
    const bool negative = accept('-');
    Expression base = parse_atom();
    if (accept('^')) base = power(base, parse_rational());
    return negative ? negate(base) : base;
  }

  long parse_integer() {
    skip_space();
    const std::size_t start = pos_;
    std::size_t end = pos_;
    if (end < src_.size() && (src_[end] == '-' || src_[end] == '+')) ++end;
    while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
    long value = 0;
    const char* first = src_.data() + start;
    if (start < src_.size() && src_[start] == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, src_.data() + end, value);
    if (ec != std::errc() || ptr != src_.data() + end || end == start) fail_at(start, "expected an integer exponent");
    pos_ = end;
    return value;
  }

  Rational parse_rational() {
    if (accept('(')) {
      const long num = parse_integer();
      expect('/');
      const std::size_t at = pos_;
      const long den = parse_integer();
      if (den == 0) fail_at(at, "zero denominator in exponent");
      expect(')');
      return Rational::make(num, den);
    }
    return Rational{parse_integer(), 1};
  }

  Expression parse_number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
    };
    digits();
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      digits();
    }
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t exp_end = end + 1;
      if (exp_end < src_.size() && (src_[exp_end] == '+' || src_[exp_end] == '-')) ++exp_end;
      if (exp_end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp_end]))) {
        end = exp_end;
        digits();
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + end, value);
    if (ec != std::errc() || ptr != src_.data() + end) fail_at(start, "malformed number");
    pos_ = end;
    return Expression::constant(value);
  }

  Expression parse_atom() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      Expression inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = src_.substr(start, pos_ - start);
      if (auto fn = lookup_function(name)) {
        skip_space();
        if (pos_ >= src_.size() || src_[pos_] != '(') fail_at(start, "function '" + std::string(name) + "' needs an argument list");
        ++pos_;
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == ')') fail_at(start, "arity mismatch: '" + std::string(name) + "' takes 1 argument, got 0");
        Expression arg = parse_expr();
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == ',') fail_at(start, "arity mismatch: '" + std::string(name) + "' takes 1 argument");
        expect(')');
        return apply(*fn, arg);
      }
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == name) return Expression::variable(static_cast<int>(i), std::string(name));
      }
      fail_at(start, "unknown identifier '" + std::string(name) + "'");
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view src_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse(std::string_view source, std::span<const std::string> variables) {
  return Parser(source, variables).parse_all();
}

}  // namespace hessgeo
