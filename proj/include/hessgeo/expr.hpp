#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hessgeo {

enum class NodeKind : std::uint8_t {
  kConstant,
  kVariable,
  kSum,
  kProduct,
  kQuotient,
  kPower,
  kLog,
  kExp,
  kSqrt,
  kSin,
  kCos,
  kAbs,
};

/// Reduced fraction with positive denominator.
struct Rational {
  long num = 1;
  long den = 1;

  static Rational make(long num, long den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_integer() const { return den == 1; }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct Node;

/// Immutable scalar expression in n real variables. Copies share the tree.
class Expression {
 public:
  Expression();  // the constant 0
  explicit Expression(std::shared_ptr<const Node> node);

  static Expression constant(double value);
  static Expression variable(int index, std::string name);

  NodeKind kind() const;
  const Node& node() const { return *node_; }
  bool is_constant() const { return kind() == NodeKind::kConstant; }
  bool is_constant(double value) const;
  double constant_value() const;
  const std::vector<Expression>& children() const;

  /// Largest variable index referenced plus one (0 for closed expressions).
  int arity() const;

 private:
  std::shared_ptr<const Node> node_;
};

struct Node {
  NodeKind kind = NodeKind::kConstant;
  double value = 0.0;    // kConstant
  int index = -1;        // kVariable
  std::string name;      // kVariable
  Rational exponent;     // kPower
  std::vector<Expression> children;
};

// Simplifying constructors: constant folding, 0/1 identities and flattening
// of nested sums and products. No other canonicalization takes place.
Expression add(std::vector<Expression> terms);
Expression multiply(std::vector<Expression> factors);
Expression divide(const Expression& numerator, const Expression& denominator);
Expression power(const Expression& base, Rational exponent);
Expression negate(const Expression& e);
Expression apply(NodeKind function, const Expression& argument);

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression operator+(double a, const Expression& b);
Expression operator*(double a, const Expression& b);

Expression log(const Expression& e);
Expression exp(const Expression& e);
Expression sqrt(const Expression& e);
Expression sin(const Expression& e);
Expression cos(const Expression& e);

/// Exact partial derivative with respect to variable `var`. Throws Error for
/// abs nodes, which are only meant for domain predicates.
Expression differentiate(const Expression& e, int var);

/// Evaluates at `point`; throws DomainError naming the offending subexpression.
double evaluate(const Expression& e, std::span<const double> point);

/// Replaces variable i by replacements[i].
Expression substitute(const Expression& e, std::span<const Expression> replacements);

/// Text form accepted by parse(); parse(to_string(e)) is structurally equal to e.
std::string to_string(const Expression& e);

bool structurally_equal(const Expression& a, const Expression& b);

std::size_t node_count(const Expression& e);

const char* function_name(NodeKind kind);

}  // namespace hessgeo
