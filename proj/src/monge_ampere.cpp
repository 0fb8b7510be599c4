#include "hessgeo/monge_ampere.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "hessgeo/errors.hpp"

namespace hessgeo {

Cone parse_cone(std::string_view name) {
  if (name == "orthant") return Cone::kOrthant;
  if (name == "lorentz") return Cone::kLorentz;
  throw ValidationError("unknown cone '" + std::string(name) + "' (expected orthant or lorentz)");
}

const char* cone_name(Cone cone) { return cone == Cone::kOrthant ? "orthant" : "lorentz"; }

std::vector<std::string> cone_variables(Cone cone) {
  if (cone == Cone::kOrthant) return {"x", "y"};
  return {"x", "t"};
}

Window default_window(Cone cone) {
  if (cone == Cone::kOrthant) return {1.0, 2.0, 1.0, 2.0};
  return {0.05, 0.4, 1.2, 1.8};
}

namespace {

bool inside_cone(Cone cone, double a, double b) {
  if (cone == Cone::kOrthant) return a > 0.0 && b > 0.0;
  return b > std::fabs(a);
}

}  // namespace

void ConeProblem::validate() const {
  if (resolution < 9) throw ValidationError(fmt::format("resolution must be at least 9, got {}", resolution));
  if (!(window.lo1 < window.hi1) || !(window.lo2 < window.hi2)) {
    throw ValidationError("window bounds must satisfy a < b and c < d");
  }
  for (double a : {window.lo1, window.hi1}) {
    for (double b : {window.lo2, window.hi2}) {
      if (!inside_cone(cone, a, b)) {
        throw ValidationError(fmt::format("window corner ({}, {}) is not inside the open {} cone", a, b,
                                          cone_name(cone)));
      }
    }
  }
  if (!(perturbation >= 0.0) || !(tolerance > 0.0) || max_iterations < 1) {
    throw ValidationError("invalid solver parameters");
  }
}

double MASolution::step1() const { return (window.hi1 - window.lo1) / (resolution + 1); }
double MASolution::step2() const { return (window.hi2 - window.lo2) / (resolution + 1); }

Point MASolution::node(int i, int j) const {
  Point p(2);
  p << window.lo1 + i * step1(), window.lo2 + j * step2();
  return p;
}

double exact_cone_solution(Cone cone, const Point& p) {
  if (p.size() != 2) throw DimensionError("cone solutions are planar");
  if (!inside_cone(cone, p(0), p(1))) {
    throw DomainError(cone_name(cone), fmt::format("point ({}, {}) is outside the open cone", p(0), p(1)));
  }
  if (cone == Cone::kOrthant) return -0.5 * (std::log(p(0)) + std::log(p(1))) - 0.5 * std::log(2.0);
  return -0.5 * std::log(p(1) * p(1) - p(0) * p(0));
}

PotentialChart exact_solution_chart(Cone cone) {
  if (cone == Cone::kOrthant) {
    const std::vector<std::string> dom{"x", "y"};
    return PotentialChart::from_source("cheng_yau_orthant", cone_variables(cone),
                                       "-0.5*(log(x) + log(y)) - 0.5*log(2)", dom);
  }
  const std::vector<std::string> dom{"t^2 - x^2", "t"};
  return PotentialChart::from_source("cheng_yau_lorentz", cone_variables(cone), "-0.5*log(t^2 - x^2)", dom);
}

double exact_pde_residual(Cone cone, const Point& p) {
  static const PotentialChart charts[2] = {exact_solution_chart(Cone::kOrthant),
                                           exact_solution_chart(Cone::kLorentz)};
  const PotentialChart& chart = charts[cone == Cone::kOrthant ? 0 : 1];
  chart.require_admissible(p);
  const Eigen::MatrixXd h = to_matrix(derivative_tensor(chart, 2, p));
  return std::fabs(h.determinant() - std::exp(4.0 * chart.value(p)));
}

// ---------------------------------------------------------------------------
// Newton solver
// ---------------------------------------------------------------------------

namespace {

struct Grid {
  int m;
  double h1, h2;

  int index(int i, int j) const { return (j - 1) * m + (i - 1); }
  bool interior(int i, int j) const { return i >= 1 && i <= m && j >= 1 && j <= m; }
};

struct NodeHessian {
  double uxx, uyy, uxy;

  double det() const { return uxx * uyy - uxy * uxy; }
  double min_eigenvalue() const {
    const double mean = 0.5 * (uxx + uyy);
    const double diff = 0.5 * (uxx - uyy);
    return mean - std::sqrt(diff * diff + uxy * uxy);
  }
};

NodeHessian node_hessian(const Grid& g, const Eigen::MatrixXd& u, int i, int j) {
  return {(u(i + 1, j) - 2.0 * u(i, j) + u(i - 1, j)) / (g.h1 * g.h1),
          (u(i, j + 1) - 2.0 * u(i, j) + u(i, j - 1)) / (g.h2 * g.h2),
          (u(i + 1, j + 1) - u(i + 1, j - 1) - u(i - 1, j + 1) + u(i - 1, j - 1)) / (4.0 * g.h1 * g.h2)};
}

struct Evaluation {
  Eigen::VectorXd g;
  double max_abs = 0.0;
  double l2 = 0.0;
  double min_eigenvalue = 0.0;
};

Evaluation evaluate_residual(const Grid& grid, const Eigen::MatrixXd& u) {
  Evaluation e;
  e.g.resize(grid.m * grid.m);
  e.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= grid.m; ++j) {
    for (int i = 1; i <= grid.m; ++i) {
      const NodeHessian h = node_hessian(grid, u, i, j);
      const double r = h.det() - std::exp(4.0 * u(i, j));
      e.g(grid.index(i, j)) = r;
      e.max_abs = std::max(e.max_abs, std::fabs(r));
      e.min_eigenvalue = std::min(e.min_eigenvalue, h.min_eigenvalue());
    }
  }
  e.l2 = e.g.norm();
  return e;
}

Eigen::SparseMatrix<double> jacobian(const Grid& grid, const Eigen::MatrixXd& u) {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(9 * grid.m * grid.m));
  const double c11 = 1.0 / (grid.h1 * grid.h1);
  const double c22 = 1.0 / (grid.h2 * grid.h2);
  const double c12 = 1.0 / (4.0 * grid.h1 * grid.h2);
  for (int j = 1; j <= grid.m; ++j) {
    for (int i = 1; i <= grid.m; ++i) {
      const int row = grid.index(i, j);
      const NodeHessian h = node_hessian(grid, u, i, j);
      auto put = [&](int a, int b, double v) {
        if (grid.interior(a, b)) entries.emplace_back(row, grid.index(a, b), v);
      };
      // d det = uyy d uxx + uxx d uyy - 2 uxy d uxy
      put(i, j, -2.0 * c11 * h.uyy - 2.0 * c22 * h.uxx - 4.0 * std::exp(4.0 * u(i, j)));
      put(i + 1, j, c11 * h.uyy);
      put(i - 1, j, c11 * h.uyy);
      put(i, j + 1, c22 * h.uxx);
      put(i, j - 1, c22 * h.uxx);
      put(i + 1, j + 1, -2.0 * h.uxy * c12);
      put(i - 1, j - 1, -2.0 * h.uxy * c12);
      put(i + 1, j - 1, 2.0 * h.uxy * c12);
      put(i - 1, j + 1, 2.0 * h.uxy * c12);
    }
  }
  Eigen::SparseMatrix<double> jac(grid.m * grid.m, grid.m * grid.m);
  jac.setFromTriplets(entries.begin(), entries.end());
  return jac;
}

std::string format_trace(const std::vector<NewtonStep>& trace) {
  std::string s;
  for (const auto& step : trace) {
    s += fmt::format("\n  iteration {:2d}: max|G| = {:.3e}, damping = {:g}, convexity rejections = {}",
                     step.iteration, step.residual, step.damping, step.convexity_rejections);
  }
  return s;
}

// Least-squares quadratic through the boundary ring, with its Hessian pushed
// to be positive definite.
void quadratic_interpolant(MASolution& s) {
  const int m = s.resolution;
  std::vector<Point> pts;
  std::vector<double> vals;
  for (int j = 0; j <= m + 1; ++j) {
    for (int i = 0; i <= m + 1; ++i) {
      if (i == 0 || j == 0 || i == m + 1 || j == m + 1) {
        pts.push_back(s.node(i, j));
        vals.push_back(s.u(i, j));
      }
    }
  }
  const auto rows = static_cast<Eigen::Index>(pts.size());
  const Point center = s.node(0, 0) + 0.5 * (s.node(m + 1, m + 1) - s.node(0, 0));
  Eigen::MatrixXd a(rows, 6);
  Eigen::VectorXd b(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Point d = pts[static_cast<std::size_t>(r)] - center;
    a.row(r) << 1.0, d(0), d(1), d(0) * d(0), d(0) * d(1), d(1) * d(1);
    b(r) = vals[static_cast<std::size_t>(r)];
  }
  Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  Eigen::Matrix2d hess;
  hess << 2.0 * c(3), c(4), c(4), 2.0 * c(5);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(hess);
  const double top = std::max(eig.eigenvalues().maxCoeff(), 1e-3);
  if (eig.eigenvalues().minCoeff() < 0.1 * top) {
    Eigen::Vector2d lambda = eig.eigenvalues().cwiseMax(0.1 * top);
    hess = eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
    c(3) = 0.5 * hess(0, 0);
    c(4) = hess(0, 1);
    c(5) = 0.5 * hess(1, 1);
    // refit the affine part with the quadratic part fixed
    Eigen::VectorXd rest = b - a.rightCols(3) * c.tail(3);
    c.head(3) = a.leftCols(3).colPivHouseholderQr().solve(rest);
  }
  for (int j = 1; j <= m; ++j) {
    for (int i = 1; i <= m; ++i) {
      Eigen::VectorXd row(6);
      const Point d = s.node(i, j) - center;
      row << 1.0, d(0), d(1), d(0) * d(0), d(0) * d(1), d(1) * d(1);
      s.u(i, j) = row.dot(c);
    }
  }
}

// The quadratic interior does not match the boundary ring, which leaves the
// nodes next to the ring non-convex. A few fixed-point sweeps of
//   Lap u = sqrt((u_xx - u_yy)^2 + 4 u_xy^2 + 4 e^{4u})
// (the larger root of the 2x2 determinant condition) smooth the guess into a
// convex one before Newton starts. Stops at the first discretely convex sweep.
void poisson_relaxation(MASolution& s, const Grid& grid, int max_sweeps) {
  const int m = s.resolution;
  const double c11 = 1.0 / (grid.h1 * grid.h1);
  const double c22 = 1.0 / (grid.h2 * grid.h2);
  std::vector<Eigen::Triplet<double>> entries;
  Eigen::VectorXd boundary = Eigen::VectorXd::Zero(m * m);
  for (int j = 1; j <= m; ++j) {
    for (int i = 1; i <= m; ++i) {
      const int row = grid.index(i, j);
      entries.emplace_back(row, row, -2.0 * (c11 + c22));
      const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
      for (int k = 0; k < 4; ++k) {
        const double c = k < 2 ? c11 : c22;
        if (grid.interior(nb[k][0], nb[k][1])) {
          entries.emplace_back(row, grid.index(nb[k][0], nb[k][1]), c);
        } else {
          boundary(row) += c * s.u(nb[k][0], nb[k][1]);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> lap(m * m, m * m);
  lap.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu(lap);
  if (lu.info() != Eigen::Success) throw NumericalError("Poisson relaxation of the initial guess failed");
  Eigen::VectorXd rhs(m * m);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (evaluate_residual(grid, s.u).min_eigenvalue > 0.0) return;
    for (int j = 1; j <= m; ++j) {
      for (int i = 1; i <= m; ++i) {
        const NodeHessian h = node_hessian(grid, s.u, i, j);
        const double d = h.uxx - h.uyy;
        rhs(grid.index(i, j)) = std::sqrt(d * d + 4.0 * h.uxy * h.uxy + 4.0 * std::exp(4.0 * s.u(i, j))) -
                                boundary(grid.index(i, j));
      }
    }
    const Eigen::VectorXd v = lu.solve(rhs);
    for (int j = 1; j <= m; ++j) {
      for (int i = 1; i <= m; ++i) s.u(i, j) = v(grid.index(i, j));
    }
  }
}

}  // namespace

MASolution solve(const ConeProblem& problem) {
  problem.validate();
  const int m = problem.resolution;
  MASolution s;
  s.cone = problem.cone;
  s.window = problem.window;
  s.resolution = m;
  s.u = Eigen::MatrixXd::Zero(m + 2, m + 2);
  const Grid grid{m, s.step1(), s.step2()};

  for (int j = 0; j <= m + 1; ++j) {
    for (int i = 0; i <= m + 1; ++i) s.u(i, j) = exact_cone_solution(problem.cone, s.node(i, j));
  }
  if (problem.guess == InitialGuess::kPerturbedExact) {
    for (int j = 1; j <= m; ++j) {
      for (int i = 1; i <= m; ++i) {
        const double xi = static_cast<double>(i) / (m + 1);
        const double eta = static_cast<double>(j) / (m + 1);
        s.u(i, j) += problem.perturbation * std::sin(std::numbers::pi * xi) * std::sin(std::numbers::pi * eta);
      }
    }
  } else {
    quadratic_interpolant(s);
    poisson_relaxation(s, grid, problem.max_relaxation_sweeps);
  }

  Evaluation current = evaluate_residual(grid, s.u);
  if (!(current.min_eigenvalue > 0.0)) {
    throw NumericalError(fmt::format("initial guess is not discretely convex (min eigenvalue {:.3e})",
                                     current.min_eigenvalue));
  }
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  while (current.max_abs >= problem.tolerance && s.iterations < problem.max_iterations) {
    const Eigen::SparseMatrix<double> jac = jacobian(grid, s.u);
    lu.compute(jac);
    if (lu.info() != Eigen::Success) {
      throw NumericalError("singular Newton system at iteration " + std::to_string(s.iterations + 1) +
                           format_trace(s.trace));
    }
    const Eigen::VectorXd delta = lu.solve(-current.g);

    NewtonStep step;
    step.iteration = s.iterations + 1;
    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 20; ++halving, alpha *= 0.5) {
      Eigen::MatrixXd trial = s.u;
      for (int j = 1; j <= m; ++j) {
        for (int i = 1; i <= m; ++i) trial(i, j) += alpha * delta(grid.index(i, j));
      }
      Evaluation next = evaluate_residual(grid, trial);
      if (!std::isfinite(next.l2) || !(next.l2 < (1.0 - 1e-4 * alpha) * current.l2)) continue;
      if (!(next.min_eigenvalue > 0.0)) {
        if (++step.convexity_rejections >= 5) {
          step.residual = current.max_abs;
          step.damping = alpha;
          s.trace.push_back(step);
          throw NumericalError("five damped Newton trials in a row left the convex cone" + format_trace(s.trace));
        }
        continue;
      }
      s.u = std::move(trial);
      current = std::move(next);
      accepted = true;
      break;
    }
    step.damping = alpha;
    step.residual = current.max_abs;
    ++s.iterations;
    s.trace.push_back(step);
    if (!accepted) {
      throw NumericalError("line search exhausted 20 halvings at iteration " + std::to_string(s.iterations) +
                           format_trace(s.trace));
    }
  }

  s.converged = current.max_abs < problem.tolerance;
  s.residual_norm = current.max_abs;
  s.min_hessian_eigenvalue = current.min_eigenvalue;
  s.residual = Eigen::MatrixXd::Zero(m + 2, m + 2);
  for (int j = 1; j <= m; ++j) {
    for (int i = 1; i <= m; ++i) s.residual(i, j) = current.g(grid.index(i, j));
  }
  return s;
}

double max_error(const MASolution& solution) {
  double e = 0.0;
  for (int j = 1; j <= solution.resolution; ++j) {
    for (int i = 1; i <= solution.resolution; ++i) {
      e = std::max(e, std::fabs(solution.u(i, j) - exact_cone_solution(solution.cone, solution.node(i, j))));
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// Identities of the Cheng-Yau potential
// ---------------------------------------------------------------------------

double UnitCovectorResidual::max() const { return std::max({gradient_norm, euler, sharp}); }

namespace {

void accumulate(UnitCovectorResidual& r, const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess, const Point& x) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(hess);
  if (!lu.isInvertible() || std::fabs(hess.determinant()) < tol::kDegenerateDeterminant) {
    std::string where;
    for (Eigen::Index i = 0; i < x.size(); ++i) where += (i ? ", " : "") + fmt::format("{}", x(i));
    throw DegenerateMetricError("degenerate Hessian at (" + where + ")");
  }
  const Eigen::VectorXd sharp = lu.solve(grad);
  r.gradient_norm = std::max(r.gradient_norm, std::fabs(grad.dot(sharp) - 1.0));
  r.euler = std::max(r.euler, std::fabs(grad.dot(x) + 1.0));
  r.sharp = std::max(r.sharp, (sharp + x).norm());
}

}  // namespace

UnitCovectorResidual unit_covector_check(const PotentialChart& chart, std::span<const Point> samples) {
  UnitCovectorResidual r;
  for (const auto& p : samples) {
    chart.require_admissible(p);
    accumulate(r, to_vector(derivative_tensor(chart, 1, p)), to_matrix(derivative_tensor(chart, 2, p)), p);
  }
  return r;
}

UnitCovectorResidual unit_covector_check(const MASolution& s) {
  UnitCovectorResidual r;
  const Grid grid{s.resolution, s.step1(), s.step2()};
  for (int j = 1; j <= s.resolution; ++j) {
    for (int i = 1; i <= s.resolution; ++i) {
      Eigen::VectorXd grad(2);
      grad << (s.u(i + 1, j) - s.u(i - 1, j)) / (2.0 * grid.h1), (s.u(i, j + 1) - s.u(i, j - 1)) / (2.0 * grid.h2);
      const NodeHessian h = node_hessian(grid, s.u, i, j);
      Eigen::MatrixXd hess(2, 2);
      hess << h.uxx, h.uxy, h.uxy, h.uyy;
      accumulate(r, grad, hess, s.node(i, j));
    }
  }
  return r;
}

double automorphism_residual(Cone cone, std::span<const Point> samples, double rapidity) {
  double worst = 0.0;
  for (const auto& p : samples) {
    Point q(2);
    if (cone == Cone::kOrthant) {
      q << p(1), p(0);
    } else {
      const double c = std::cosh(rapidity);
      const double sh = std::sinh(rapidity);
      q << c * p(0) + sh * p(1), sh * p(0) + c * p(1);
    }
    worst = std::max(worst, std::fabs(exact_cone_solution(cone, q) - exact_cone_solution(cone, p)));
  }
  return worst;
}

double homogeneity_residual(Cone cone, std::span<const Point> samples, double k) {
  if (!(k > 0.0)) throw ValidationError("scale factor must be positive");
  double worst = 0.0;
  for (const auto& p : samples) {
    const Point q = k * p;
    worst = std::max(worst,
                     std::fabs(exact_cone_solution(cone, q) - exact_cone_solution(cone, p) + std::log(k)));
  }
  return worst;
}

void write_csv(const MASolution& s, std::ostream& out) {
  const auto names = cone_variables(s.cone);
  out << names[0] << ',' << names[1] << ",u,residual\n";
  for (int i = 1; i <= s.resolution; ++i) {
    for (int j = 1; j <= s.resolution; ++j) {
      const Point p = s.node(i, j);
      out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", p(0), p(1), s.u(i, j), s.residual(i, j));
    }
  }
}

}  // namespace hessgeo
