#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hessgeo/chart.hpp"

namespace hessgeo {

// det Hess u = e^{2nu} on planar cones (n = 2), solved on a box inside the cone
// with Dirichlet data from the exact solution.

enum class Cone { kOrthant, kLorentz };

/// "orthant" or "lorentz"; throws ValidationError otherwise.
Cone parse_cone(std::string_view name);
const char* cone_name(Cone cone);

/// Coordinate names: (x, y) for the orthant, (x, t) for the Lorentz cone.
std::vector<std::string> cone_variables(Cone cone);

/// First axis in [lo1, hi1], second axis in [lo2, hi2].
struct Window {
  double lo1 = 0.0, hi1 = 0.0, lo2 = 0.0, hi2 = 0.0;
};

Window default_window(Cone cone);

enum class InitialGuess {
  kPerturbedExact,        // exact + amplitude * sin(pi xi) sin(pi eta)
  kQuadraticInterpolant,  // convex quadratic fit of the boundary data, relaxed by Poisson sweeps
};

struct ConeProblem {
  Cone cone = Cone::kOrthant;
  Window window;
  int resolution = 33;  // interior nodes per axis
  InitialGuess guess = InitialGuess::kQuadraticInterpolant;
  double perturbation = 1e-3;
  int max_relaxation_sweeps = 200;
  double tolerance = 1e-10;  // on max |G|
  int max_iterations = 50;

  /// Throws ValidationError unless the closed window lies in the open cone and m >= 9.
  void validate() const;
};

struct NewtonStep {
  int iteration = 0;
  double residual = 0.0;  // max |G| after the step
  double damping = 1.0;
  int convexity_rejections = 0;
};

struct MASolution {
  Cone cone = Cone::kOrthant;
  Window window;
  int resolution = 0;
  Eigen::MatrixXd u;         // (m+2) x (m+2) including the boundary ring, u(i, j)
  Eigen::MatrixXd residual;  // G at nodes, zero on the ring
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  double min_hessian_eigenvalue = 0.0;  // over interior nodes
  std::vector<NewtonStep> trace;

  double step1() const;
  double step2() const;
  Point node(int i, int j) const;
};

/// u = -1/2 (log x + log y) - 1/2 log 2 on the orthant, -1/2 log(t^2 - x^2) on
/// the Lorentz cone. Throws DomainError outside the open cone.
double exact_cone_solution(Cone cone, const Point& p);

/// The exact solution as a chart on the cone.
PotentialChart exact_solution_chart(Cone cone);

/// |det Hess u - e^{4u}| from symbolic derivatives.
double exact_pde_residual(Cone cone, const Point& p);

/// Damped Newton. Throws NumericalError (message carries the iteration trace)
/// when the line search needs more than 20 halvings or when five trials of
/// one Newton step in a row are rejected as non-convex.
MASolution solve(const ConeProblem& problem);

/// max over interior nodes of |u - exact|.
double max_error(const MASolution& solution);

struct UnitCovectorResidual {
  double gradient_norm = 0.0;  // |<du, H^-1 du> - 1|
  double euler = 0.0;          // |<du, x> + 1|
  double sharp = 0.0;          // |H^-1 du + x|
  double max() const;
};

/// Symbolic derivatives of a chart. Throws DegenerateMetricError if the
/// Hessian is singular at a sample.
UnitCovectorResidual unit_covector_check(const PotentialChart& chart, std::span<const Point> samples);

/// Central differences on interior nodes of a solver grid.
UnitCovectorResidual unit_covector_check(const MASolution& solution);

/// max |u(Lp) - u(p)| for the orthant swap or a Lorentz boost of the given rapidity.
double automorphism_residual(Cone cone, std::span<const Point> samples, double rapidity = 0.3);

/// max |u(k p) - u(p) + log k|.
double homogeneity_residual(Cone cone, std::span<const Point> samples, double k);

/// CSV with header "x,y,u,residual" or "x,t,u,residual", interior nodes, i outer.
void write_csv(const MASolution& solution, std::ostream& out);

}  // namespace hessgeo
