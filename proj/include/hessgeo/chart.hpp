#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hessgeo/conventions.hpp"
#include "hessgeo/expr.hpp"
#include "hessgeo/tensor.hpp"

namespace hessgeo {

using Point = Eigen::VectorXd;

/// One affine chart: affine coordinates x^1..x^n, a potential f and a domain
/// given as expressions that must be strictly positive at admissible points.
///
/// Symbolic partial derivatives of the potential are memoized per sorted
/// multi-index and shared between copies of the chart. The cache is guarded
/// by a mutex, so a chart may be used from several threads at once.
class PotentialChart {
 public:
  PotentialChart(std::string name, std::vector<std::string> variables, Expression potential,
                 std::vector<Expression> domain = {});

  /// Builds a chart from expression text.
  static PotentialChart from_source(std::string name, std::vector<std::string> variables,
                                    std::string_view potential,
                                    std::span<const std::string> domain = {});

  const std::string& name() const { return name_; }
  int dimension() const { return static_cast<int>(variables_.size()); }
  const std::vector<std::string>& variables() const { return variables_; }
  const Expression& potential() const { return potential_; }
  const std::vector<Expression>& domain() const { return domain_; }

  /// All domain expressions evaluate to more than `margin` at p.
  bool admissible(const Point& p, double margin = tol::kDomainMargin) const;

  /// Throws DomainError when p is not admissible.
  void require_admissible(const Point& p) const;

  double value(const Point& p) const;

  /// Memoized symbolic partial derivative of the potential.
  const Expression& derivative(std::span<const int> multi_index) const;

  /// Same chart with a different potential (fresh derivative cache).
  PotentialChart with_potential(Expression potential, std::string name) const;

  /// Variables as expressions, in index order.
  std::vector<Expression> variable_expressions() const;

 private:
  struct DerivativeCache;

  std::string name_;
  std::vector<std::string> variables_;
  Expression potential_;
  std::vector<Expression> domain_;
  std::shared_ptr<DerivativeCache> cache_;
};

/// Fully symmetric array of all order-th partials of the potential at p
/// (order 1..4). Each distinct multi-index is evaluated once and copied to
/// every permutation, so symmetry is exact.
Tensor derivative_tensor(const PotentialChart& chart, int order, const Point& p);

Eigen::MatrixXd to_matrix(const Tensor& rank2);
Eigen::VectorXd to_vector(const Tensor& rank1);

/// Evaluates a list of expressions (e.g. a covector field) at p.
Eigen::VectorXd evaluate_all(std::span<const Expression> exprs, const Point& p);

/// Axis-aligned sampling box.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Uniform rejection sampling of admissible points inside `box`. Throws
/// NumericalError if fewer than `count` points are found within
/// 1000 * count draws.
std::vector<Point> sample_admissible(const PotentialChart& chart, const Box& box, int count,
                                     std::mt19937_64& rng);

}  // namespace hessgeo
