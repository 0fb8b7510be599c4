#include "hessgeo/chart.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <set>

#include "hessgeo/errors.hpp"
#include "hessgeo/parser.hpp"

namespace hessgeo {

struct PotentialChart::DerivativeCache {
  std::mutex mutex;
  std::map<std::vector<int>, Expression> entries;
};

namespace {

bool is_reserved(const std::string& name) {
  return name == "log" || name == "exp" || name == "sqrt" || name == "sin" || name == "cos" || name == "abs";
}

bool is_identifier(const std::string& name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  return std::all_of(name.begin(), name.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

PotentialChart::PotentialChart(std::string name, std::vector<std::string> variables, Expression potential,
                               std::vector<Expression> domain)
    : name_(std::move(name)),
      variables_(std::move(variables)),
      potential_(std::move(potential)),
      domain_(std::move(domain)),
      cache_(std::make_shared<DerivativeCache>()) {
  if (variables_.empty()) throw DimensionError("chart dimension must be at least 1");
  std::set<std::string> seen;
  for (const auto& v : variables_) {
    if (!is_identifier(v)) throw Error("invalid variable name '" + v + "'");
    if (is_reserved(v)) throw Error("variable name '" + v + "' is a reserved function name");
    if (!seen.insert(v).second) throw Error("duplicate variable name '" + v + "'");
  }
  const int n = dimension();
  if (potential_.arity() > n) throw DimensionError("potential references a variable beyond the chart dimension");
  for (const auto& d : domain_) {
    if (d.arity() > n) throw DimensionError("domain predicate references a variable beyond the chart dimension");
  }
}

PotentialChart PotentialChart::from_source(std::string name, std::vector<std::string> variables,
                                           std::string_view potential, std::span<const std::string> domain) {
  Expression f = parse(potential, variables);
  std::vector<Expression> predicates;
  predicates.reserve(domain.size());
  for (const auto& d : domain) predicates.push_back(parse(d, variables));
  return PotentialChart(std::move(name), std::move(variables), std::move(f), std::move(predicates));
}

bool PotentialChart::admissible(const Point& p, double margin) const {
  if (p.size() != dimension()) return false;
  if (!p.allFinite()) return false;
  try {
    for (const auto& d : domain_) {
      if (!(evaluate(d, {p.data(), static_cast<std::size_t>(p.size())}) > margin)) return false;
    }
  } catch (const DomainError&) {
    return false;
  }
  return true;
}

void PotentialChart::require_admissible(const Point& p) const {
  if (p.size() != dimension()) {
    throw DimensionError("point has " + std::to_string(p.size()) + " coordinates, chart '" + name_ + "' has " +
                         std::to_string(dimension()));
  }
  for (const auto& d : domain_) {
    const double v = evaluate(d, {p.data(), static_cast<std::size_t>(p.size())});
    if (!(v > tol::kDomainMargin)) throw DomainError(to_string(d), "domain predicate not positive at point");
  }
}

double PotentialChart::value(const Point& p) const {
  return evaluate(potential_, {p.data(), static_cast<std::size_t>(p.size())});
}

const Expression& PotentialChart::derivative(std::span<const int> multi_index) const {
  std::vector<int> key(multi_index.begin(), multi_index.end());
  for (int i : key) {
    if (i < 0 || i >= dimension()) throw DimensionError("derivative index out of range");
  }
  std::sort(key.begin(), key.end());
  if (key.empty()) return potential_;
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->entries.find(key);
    if (it != cache_->entries.end()) return it->second;
  }
  const int last = key.back();
  std::vector<int> parent(key.begin(), key.end() - 1);
  Expression d = differentiate(derivative(parent), last);
  std::lock_guard lock(cache_->mutex);
  return cache_->entries.emplace(std::move(key), std::move(d)).first->second;
}

PotentialChart PotentialChart::with_potential(Expression potential, std::string name) const {
  return PotentialChart(std::move(name), variables_, std::move(potential), domain_);
}

std::vector<Expression> PotentialChart::variable_expressions() const {
  std::vector<Expression> out;
  for (int i = 0; i < dimension(); ++i) out.push_back(Expression::variable(i, variables_[static_cast<std::size_t>(i)]));
  return out;
}

namespace {

// Visits every non-decreasing multi-index of the given length.
template <class F>
void for_each_sorted_index(int n, int order, std::vector<int>& idx, int pos, F&& visit) {
  if (pos == order) {
    visit(idx);
    return;
  }
  const int start = pos == 0 ? 0 : idx[static_cast<std::size_t>(pos - 1)];
  for (int i = start; i < n; ++i) {
    idx[static_cast<std::size_t>(pos)] = i;
    for_each_sorted_index(n, order, idx, pos + 1, visit);
  }
}

}  // namespace

Tensor derivative_tensor(const PotentialChart& chart, int order, const Point& p) {
  if (order < 1 || order > 4) throw Error("derivative_tensor supports orders 1 to 4");
  const int n = chart.dimension();
  if (p.size() != n) throw DimensionError("point dimension does not match chart");
  Tensor t(n, order);
  const std::span<const double> at{p.data(), static_cast<std::size_t>(n)};
  std::vector<int> idx(static_cast<std::size_t>(order));
  for_each_sorted_index(n, order, idx, 0, [&](const std::vector<int>& sorted) {
    const double v = evaluate(chart.derivative(sorted), at);
    std::vector<int> perm = sorted;
    do {
      switch (order) {
        case 1:
          t(perm[0]) = v;
          break;
        case 2:
          t(perm[0], perm[1]) = v;
          break;
        case 3:
          t(perm[0], perm[1], perm[2]) = v;
          break;
        default:
          t(perm[0], perm[1], perm[2], perm[3]) = v;
          break;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  });
  return t;
}

Eigen::MatrixXd to_matrix(const Tensor& rank2) {
  if (rank2.rank() != 2) throw DimensionError("to_matrix needs a rank-2 tensor");
  const int n = rank2.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = rank2(i, j);
  }
  return m;
}

Eigen::VectorXd to_vector(const Tensor& rank1) {
  if (rank1.rank() != 1) throw DimensionError("to_vector needs a rank-1 tensor");
  Eigen::VectorXd v(rank1.dim());
  for (int i = 0; i < rank1.dim(); ++i) v(i) = rank1(i);
  return v;
}

Eigen::VectorXd evaluate_all(std::span<const Expression> exprs, const Point& p) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(exprs.size()));
  const std::span<const double> at{p.data(), static_cast<std::size_t>(p.size())};
  for (std::size_t i = 0; i < exprs.size(); ++i) v(static_cast<Eigen::Index>(i)) = evaluate(exprs[i], at);
  return v;
}

std::vector<Point> sample_admissible(const PotentialChart& chart, const Box& box, int count, std::mt19937_64& rng) {
  const int n = chart.dimension();
  if (static_cast<int>(box.lower.size()) != n || static_cast<int>(box.upper.size()) != n) {
    throw DimensionError("sampling box dimension does not match chart");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> out;
  const long max_draws = 1000L * std::max(count, 1);
  for (long draw = 0; draw < max_draws && static_cast<int>(out.size()) < count; ++draw) {
    Point p(n);
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      p(i) = box.lower[k] + (box.upper[k] - box.lower[k]) * unit(rng);
    }
    if (chart.admissible(p)) out.push_back(std::move(p));
  }
  if (static_cast<int>(out.size()) < count) {
    throw NumericalError("could not draw " + std::to_string(count) + " admissible points for chart '" + chart.name() +
                         "'");
  }
  return out;
}

}  // namespace hessgeo
