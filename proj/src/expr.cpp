#include "hessgeo/expr.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hessgeo/errors.hpp"

namespace hessgeo {

namespace {

std::shared_ptr<const Node> make_node(Node node) {
  return std::make_shared<const Node>(std::move(node));
}

Expression make_constant(double value) {
  Node n;
  n.kind = NodeKind::kConstant;
  n.value = value;
  return Expression(make_node(std::move(n)));
}

Expression make_compound(NodeKind kind, std::vector<Expression> children, Rational exponent = {}) {
  Node n;
  n.kind = kind;
  n.children = std::move(children);
  n.exponent = exponent;
  return Expression(make_node(std::move(n)));
}

bool is_function(NodeKind k) {
  switch (k) {
    case NodeKind::kLog:
    case NodeKind::kExp:
    case NodeKind::kSqrt:
    case NodeKind::kSin:
    case NodeKind::kCos:
    case NodeKind::kAbs:
      return true;
    default:
      return false;
  }
}

// Real power with the odd-denominator convention for negative bases.
// Returns NaN when the result is not real.
double real_power(double base, Rational r) {
  if (r.is_integer()) {
    if (base == 0.0 && r.num < 0) return std::nan("");
    return std::pow(base, static_cast<double>(r.num));
  }
  if (base > 0.0) return std::pow(base, r.value());
  if (base == 0.0) return r.num > 0 ? 0.0 : std::nan("");
  if (r.den % 2 == 0) return std::nan("");
  const double magnitude = std::pow(-base, r.value());
  return (r.num % 2 == 0) ? magnitude : -magnitude;
}

// Returns NaN when the argument lies outside the function's real domain.
double apply_function(NodeKind k, double x) {
  switch (k) {
    case NodeKind::kLog:
      return x > 0.0 ? std::log(x) : std::nan("");
    case NodeKind::kExp:
      return std::exp(x);
    case NodeKind::kSqrt:
      return x > 0.0 ? std::sqrt(x) : std::nan("");
    case NodeKind::kSin:
      return std::sin(x);
    case NodeKind::kCos:
      return std::cos(x);
    case NodeKind::kAbs:
      return std::fabs(x);
    default:
      return std::nan("");
  }
}

}  // namespace

Rational Rational::make(long num, long den) {
  if (den == 0) throw Error("rational exponent with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

Expression::Expression() : node_(make_constant(0.0).node_) {}

Expression::Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expression Expression::constant(double value) { return make_constant(value); }

Expression Expression::variable(int index, std::string name) {
  if (index < 0) throw Error("negative variable index");
  Node n;
  n.kind = NodeKind::kVariable;
  n.index = index;
  n.name = std::move(name);
  return Expression(make_node(std::move(n)));
}

NodeKind Expression::kind() const { return node_->kind; }

bool Expression::is_constant(double value) const {
  return node_->kind == NodeKind::kConstant && node_->value == value;
}

double Expression::constant_value() const {
  if (node_->kind != NodeKind::kConstant) throw Error("not a constant expression");
  return node_->value;
}

const std::vector<Expression>& Expression::children() const { return node_->children; }

int Expression::arity() const {
  if (node_->kind == NodeKind::kVariable) return node_->index + 1;
  int result = 0;
  for (const auto& c : node_->children) result = std::max(result, c.arity());
  return result;
}

Expression add(std::vector<Expression> terms) {
  std::vector<Expression> flat;
  double constant = 0.0;
  bool has_constant = false;
  for (auto& t : terms) {
    if (t.kind() == NodeKind::kSum) {
      for (const auto& c : t.children()) {
        if (c.is_constant()) {
          constant += c.constant_value();
          has_constant = true;
        } else {
          flat.push_back(c);
        }
      }
    } else if (t.is_constant()) {
      constant += t.constant_value();
      has_constant = true;
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (has_constant && constant != 0.0) flat.push_back(make_constant(constant));
  if (flat.empty()) return make_constant(0.0);
  if (flat.size() == 1) return flat.front();
  return make_compound(NodeKind::kSum, std::move(flat));
}

Expression multiply(std::vector<Expression> factors) {
  std::vector<Expression> flat;
  double constant = 1.0;
  for (auto& f : factors) {
    if (f.kind() == NodeKind::kProduct) {
      for (const auto& c : f.children()) {
        if (c.is_constant()) {
          constant *= c.constant_value();
        } else {
          flat.push_back(c);
        }
      }
    } else if (f.is_constant()) {
      constant *= f.constant_value();
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (constant == 0.0) return make_constant(0.0);
  if (flat.empty()) return make_constant(constant);
  if (constant != 1.0) flat.insert(flat.begin(), make_constant(constant));
  if (flat.size() == 1) return flat.front();
  return make_compound(NodeKind::kProduct, std::move(flat));
}

Expression divide(const Expression& numerator, const Expression& denominator) {
  if (denominator.is_constant(1.0)) return numerator;
  if (numerator.is_constant(0.0) && !denominator.is_constant(0.0)) return make_constant(0.0);
  if (numerator.is_constant() && denominator.is_constant() && denominator.constant_value() != 0.0) {
    return make_constant(numerator.constant_value() / denominator.constant_value());
  }
  return make_compound(NodeKind::kQuotient, {numerator, denominator});
}

Expression power(const Expression& base, Rational exponent) {
  exponent = Rational::make(exponent.num, exponent.den);
  if (exponent.num == 0) return make_constant(1.0);
  if (exponent == Rational{1, 1}) return base;
  if (base.is_constant()) {
    const double v = real_power(base.constant_value(), exponent);
    if (std::isfinite(v)) return make_constant(v);
  }
  return make_compound(NodeKind::kPower, {base}, exponent);
}

Expression negate(const Expression& e) { return multiply({make_constant(-1.0), e}); }

Expression apply(NodeKind function, const Expression& argument) {
  if (!is_function(function)) throw Error("not a unary function kind");
  if (argument.is_constant()) {
    const double v = apply_function(function, argument.constant_value());
    if (std::isfinite(v)) return make_constant(v);
  }
  return make_compound(function, {argument});
}

Expression operator+(const Expression& a, const Expression& b) { return add({a, b}); }
Expression operator-(const Expression& a, const Expression& b) { return add({a, negate(b)}); }
Expression operator*(const Expression& a, const Expression& b) { return multiply({a, b}); }
Expression operator/(const Expression& a, const Expression& b) { return divide(a, b); }
Expression operator-(const Expression& a) { return negate(a); }
Expression operator+(double a, const Expression& b) { return add({make_constant(a), b}); }
Expression operator*(double a, const Expression& b) { return multiply({make_constant(a), b}); }

Expression log(const Expression& e) { return apply(NodeKind::kLog, e); }
Expression exp(const Expression& e) { return apply(NodeKind::kExp, e); }
Expression sqrt(const Expression& e) { return apply(NodeKind::kSqrt, e); }
Expression sin(const Expression& e) { return apply(NodeKind::kSin, e); }
Expression cos(const Expression& e) { return apply(NodeKind::kCos, e); }

Expression differentiate(const Expression& e, int var) {
  if (var < 0) throw Error("negative variable index in differentiate");
  const Node& n = e.node();
  switch (n.kind) {
    case NodeKind::kConstant:
      return make_constant(0.0);
    case NodeKind::kVariable:
      return make_constant(n.index == var ? 1.0 : 0.0);
    case NodeKind::kSum: {
      std::vector<Expression> terms;
      terms.reserve(n.children.size());
      for (const auto& c : n.children) terms.push_back(differentiate(c, var));
      return add(std::move(terms));
    }
    case NodeKind::kProduct: {
      std::vector<Expression> terms;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        Expression d = differentiate(n.children[i], var);
        if (d.is_constant(0.0)) continue;
        std::vector<Expression> factors;
        factors.reserve(n.children.size());
        for (std::size_t j = 0; j < n.children.size(); ++j) {
          factors.push_back(j == i ? d : n.children[j]);
        }
        terms.push_back(multiply(std::move(factors)));
      }
      return add(std::move(terms));
    }
    case NodeKind::kQuotient: {
      const Expression& a = n.children[0];
      const Expression& b = n.children[1];
      const Expression da = differentiate(a, var);
      const Expression db = differentiate(b, var);
      if (db.is_constant(0.0)) return divide(da, b);
      return divide(da * b - a * db, power(b, {2, 1}));
    }
    case NodeKind::kPower: {
      const Expression& b = n.children[0];
      const Expression db = differentiate(b, var);
      if (db.is_constant(0.0)) return make_constant(0.0);
      const Rational r = n.exponent;
      const Expression lowered = power(b, Rational::make(r.num - r.den, r.den));
      return multiply({make_constant(r.value()), lowered, db});
    }
    case NodeKind::kLog: {
      const Expression& a = n.children[0];
      return divide(differentiate(a, var), a);
    }
    case NodeKind::kExp:
      return e * differentiate(n.children[0], var);
    case NodeKind::kSqrt: {
      const Expression& a = n.children[0];
      return divide(differentiate(a, var), 2.0 * e);
    }
    case NodeKind::kSin:
      return cos(n.children[0]) * differentiate(n.children[0], var);
    case NodeKind::kCos:
      return -(sin(n.children[0]) * differentiate(n.children[0], var));
    case NodeKind::kAbs:
      throw Error("abs is not differentiable; it is only allowed in domain predicates");
  }
  throw Error("unknown node kind");
}

double evaluate(const Expression& e, std::span<const double> point) {
  const Node& n = e.node();
  auto fail = [&](const char* why) -> double { throw DomainError(to_string(e), why); };
  switch (n.kind) {
    case NodeKind::kConstant:
      return n.value;
    case NodeKind::kVariable:
      if (static_cast<std::size_t>(n.index) >= point.size()) {
        throw Error("variable '" + n.name + "' has index beyond the point dimension");
      }
      return point[static_cast<std::size_t>(n.index)];
    case NodeKind::kSum: {
      double s = 0.0;
      for (const auto& c : n.children) s += evaluate(c, point);
      return s;
    }
    case NodeKind::kProduct: {
      double p = 1.0;
      for (const auto& c : n.children) p *= evaluate(c, point);
      return p;
    }
    case NodeKind::kQuotient: {
      const double num = evaluate(n.children[0], point);
      const double den = evaluate(n.children[1], point);
      if (den == 0.0) return fail("division by zero");
      const double v = num / den;
      if (!std::isfinite(v)) return fail("non-finite quotient");
      return v;
    }
    case NodeKind::kPower: {
      const double b = evaluate(n.children[0], point);
      const double v = real_power(b, n.exponent);
      if (std::isnan(v)) return fail(b == 0.0 ? "zero raised to a negative power" : "negative base with even root");
      if (!std::isfinite(v)) return fail("non-finite power");
      return v;
    }
    case NodeKind::kLog:
    case NodeKind::kSqrt: {
      const double a = evaluate(n.children[0], point);
      if (!(a > 0.0)) return fail("non-positive argument");
      return apply_function(n.kind, a);
    }
    case NodeKind::kExp:
    case NodeKind::kSin:
    case NodeKind::kCos:
    case NodeKind::kAbs: {
      const double v = apply_function(n.kind, evaluate(n.children[0], point));
      if (!std::isfinite(v)) return fail("non-finite result");
      return v;
    }
  }
  throw Error("unknown node kind");
}

Expression substitute(const Expression& e, std::span<const Expression> replacements) {
  const Node& n = e.node();
  switch (n.kind) {
    case NodeKind::kConstant:
      return e;
    case NodeKind::kVariable:
      if (static_cast<std::size_t>(n.index) >= replacements.size()) {
        throw Error("substitute: no replacement for variable '" + n.name + "'");
      }
      return replacements[static_cast<std::size_t>(n.index)];
    case NodeKind::kSum:
    case NodeKind::kProduct: {
      std::vector<Expression> parts;
      parts.reserve(n.children.size());
      for (const auto& c : n.children) parts.push_back(substitute(c, replacements));
      return n.kind == NodeKind::kSum ? add(std::move(parts)) : multiply(std::move(parts));
    }
    case NodeKind::kQuotient:
      return divide(substitute(n.children[0], replacements), substitute(n.children[1], replacements));
    case NodeKind::kPower:
      return power(substitute(n.children[0], replacements), n.exponent);
    default:
      return apply(n.kind, substitute(n.children[0], replacements));
  }
}

const char* function_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::kLog:
      return "log";
    case NodeKind::kExp:
      return "exp";
    case NodeKind::kSqrt:
      return "sqrt";
    case NodeKind::kSin:
      return "sin";
    case NodeKind::kCos:
      return "cos";
    case NodeKind::kAbs:
      return "abs";
    default:
      return "";
  }
}

namespace {

// Printing precedence: sum < product/quotient < unary minus < power < atom.
enum Prec { kPrecSum = 1, kPrecProduct = 2, kPrecUnary = 3, kPrecPower = 4, kPrecAtom = 5 };

struct Printed {
  std::string text;
  int prec;
};

std::string format_number(double v) { return fmt::format("{}", v); }

Printed print(const Expression& e);

std::string wrap(const Expression& e, int min_prec) {
  Printed p = print(e);
  if (p.prec < min_prec) return "(" + p.text + ")";
  return p.text;
}

std::string print_exponent(Rational r) {
  if (r.is_integer()) return std::to_string(r.num);
  return "(" + std::to_string(r.num) + "/" + std::to_string(r.den) + ")";
}

// Product factors without the leading constant, joined by '*'.
std::string join_factors(const std::vector<Expression>& factors, std::size_t first) {
  std::string out;
  for (std::size_t i = first; i < factors.size(); ++i) {
    if (!out.empty()) out += "*";
    out += wrap(factors[i], kPrecPower);
  }
  return out;
}

Printed print(const Expression& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case NodeKind::kConstant:
      if (std::signbit(n.value) && n.value != 0.0) return {"-" + format_number(-n.value), kPrecUnary};
      return {format_number(n.value), kPrecAtom};
    case NodeKind::kVariable:
      return {n.name, kPrecAtom};
    case NodeKind::kSum: {
      std::string out = wrap(n.children[0], kPrecProduct);
      for (std::size_t i = 1; i < n.children.size(); ++i) {
        const Expression& t = n.children[i];
        if (t.is_constant() && t.constant_value() < 0.0) {
          out += " - " + format_number(-t.constant_value());
        } else if (t.kind() == NodeKind::kProduct && t.children()[0].is_constant() &&
                   t.children()[0].constant_value() < 0.0) {
          const double c = -t.children()[0].constant_value();
          out += " - ";
          if (c != 1.0) out += format_number(c) + "*";
          out += join_factors(t.children(), 1);
        } else {
          out += " + " + wrap(t, kPrecProduct);
        }
      }
      return {out, kPrecSum};
    }
    case NodeKind::kProduct: {
      const Expression& lead = n.children[0];
      if (lead.is_constant()) {
        const double c = lead.constant_value();
        if (c == -1.0) return {"-" + join_factors(n.children, 1), kPrecProduct};
        return {wrap(lead, kPrecUnary) + "*" + join_factors(n.children, 1), kPrecProduct};
      }
      return {join_factors(n.children, 0), kPrecProduct};
    }
    case NodeKind::kQuotient:
      return {wrap(n.children[0], kPrecProduct) + "/" + wrap(n.children[1], kPrecPower), kPrecProduct};
    case NodeKind::kPower:
      return {wrap(n.children[0], kPrecAtom) + "^" + print_exponent(n.exponent), kPrecPower};
    default:
      return {std::string(function_name(n.kind)) + "(" + print(n.children[0]).text + ")", kPrecAtom};
  }
}

}  // namespace

std::string to_string(const Expression& e) { return print(e).text; }

bool structurally_equal(const Expression& a, const Expression& b) {
  const Node& x = a.node();
  const Node& y = b.node();
  if (&x == &y) return true;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case NodeKind::kConstant:
      return x.value == y.value;
    case NodeKind::kVariable:
      return x.index == y.index && x.name == y.name;
    case NodeKind::kPower:
      if (!(x.exponent == y.exponent)) return false;
      break;
    default:
      break;
  }
  if (x.children.size() != y.children.size()) return false;
  for (std::size_t i = 0; i < x.children.size(); ++i) {
    if (!structurally_equal(x.children[i], y.children[i])) return false;
  }
  return true;
}

std::size_t node_count(const Expression& e) {
  std::size_t count = 1;
  for (const auto& c : e.children()) count += node_count(c);
  return count;
}

}  // namespace hessgeo
