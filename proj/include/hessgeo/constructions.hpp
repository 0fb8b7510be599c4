#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hessgeo/chart.hpp"
#include "hessgeo/geometry.hpp"

namespace hessgeo {

// ---------------------------------------------------------------------------
// Warped products over a line.
//
// Given a base potential phi(x_1..x_n), a warp f(t) with f' != 0 and its
// inverse F, the coordinates y_i = e^f x_i, y = e^f carry the potential
//
//   phi_hat(y_1..y_n, y) = phi(y_1/y, ..., y_n/y) y + I(y),
//   I(y) = int_0^y F'(log s)^2 (y - s) s^-2 ds,
//
// whose Hessian in y pulls back to dt^2 + e^f(t) Hess(phi)(x).
// ---------------------------------------------------------------------------

struct WarpedSpec {
  PotentialChart base;
  Expression warp;     // f, a function of variable 0
  Expression inverse;  // F, a function of variable 0

  /// Both expressions are written in the single variable `t`.
  static WarpedSpec from_source(PotentialChart base, std::string_view warp, std::string_view inverse);
};

struct WarpedMetricCheck {
  Eigen::MatrixXd pulled_back;  // J^T Hess(phi_hat) J in (x, t) coordinates
  Eigen::MatrixXd expected;     // blockdiag(e^f Hess(phi), 1)
  double residual = 0.0;
};

/// p holds (x_1..x_n, t). The Hessian of the integral term is taken from its
/// closed form I''(y) = F'(log y)^2 / y^2, so no quadrature is involved.
/// Throws NumericalError when f'(t) vanishes or F does not invert f at t.
WarpedMetricCheck warped_metric_check(const WarpedSpec& spec, const Point& p);

enum class IntegralStatus { kConvergent, kDivergent };

struct WarpedPotentialValue {
  double value = 0.0;     // phi(x) y + integral
  double integral = 0.0;  // extrapolated limit when convergent, truncation at epsilon otherwise
  double truncated_integral = 0.0;  // int_epsilon^y
  IntegralStatus status = IntegralStatus::kConvergent;
  int halvings = 0;
};

/// Evaluates phi_hat at p = (x, t). The lower limit starts at epsilon and is
/// halved repeatedly; the integral is reported divergent when the added
/// tail pieces stop shrinking geometrically.
WarpedPotentialValue warped_potential_value(const WarpedSpec& spec, const Point& p, double epsilon);

// ---------------------------------------------------------------------------
// Example catalog.
// ---------------------------------------------------------------------------

struct ExpectedValues {
  std::optional<double> sectional_curvature;      // constant sectional curvature
  std::optional<double> transverse_sectional;     // plane h-orthogonal to the Koszul direction
  std::optional<double> scalar_curvature;         // standard normalization
  std::optional<double> paper_scalar_curvature;   // normalization quoted alongside the example
  std::optional<Signature> signature;
  std::optional<bool> flat;
  std::string note;
};

struct CatalogEntry {
  PotentialChart chart;
  Box sample_box;
  ExpectedValues expected;
};

/// Names: hyperbolic2, hyperbolic_n(N), lorentz_cone_3d, lorentz_cone_2d,
/// polar_flat, harmonic or harmonic(EXPR in x, y), maschke_sextic,
/// orthant(N), quadratic(N), homogeneous_quartic.
CatalogEntry example_catalog(std::string_view name);

std::vector<std::string> catalog_names();

// ---------------------------------------------------------------------------
// The Lorentz cone Q = t^2 - x^2 - y^2 > 0 with f = -1/2 log Q, and the map
//   Phi(tau, rho) = e^rho / (2 Im tau) (tau + conj tau, |tau|^2 - 1, |tau|^2 + 1)
// from H^2 x R with metric d rho^2 + |d tau|^2 / Im(tau)^2.
// ---------------------------------------------------------------------------

/// Phi in chart coordinates (x, y, t).
Point lorentz_cone_embedding(double re_tau, double im_tau, double rho);

struct IsometryCheck {
  double metric_residual = 0.0;    // max |J^T Hess f J - diag(1/b^2, 1/b^2, 1)|
  double quadric_residual = 0.0;   // max |Q(Phi) e^-2rho - 1|
};

/// Samples are (Re tau, Im tau, rho) with Im tau > 0. `chart` is normally
/// example_catalog("lorentz_cone_3d").chart.
IsometryCheck lorentz_cone_isometry_check(const PotentialChart& chart, std::span<const Eigen::Vector3d> samples);

// ---------------------------------------------------------------------------
// Line integrals of 1-forms.
// ---------------------------------------------------------------------------

struct LoopPath {
  std::vector<Expression> components;       // gamma(s), s in [0, 1], variable 0
  std::optional<Eigen::MatrixXd> deck_map;  // gamma(1) = deck_map * gamma(0) when present
};

/// gamma(s) = Phi(tau, s): the deck translation rho -> rho + 1, which acts on
/// the cone as multiplication by e.
LoopPath deck_translation_path(double re_tau, double im_tau);

/// int_gamma eta by adaptive Simpson (abs tol 1e-10, depth 40). Throws
/// DomainError if a sampled path point is not admissible and NumericalError
/// if the quadrature does not converge.
double loop_period(const PotentialChart& chart, std::span<const Expression> eta, const LoopPath& path);

Point path_point(const LoopPath& path, double s);

/// |period - (f(gamma(1)) - f(gamma(0)))| for eta = df.
double gradient_theorem_residual(const PotentialChart& chart, const LoopPath& path);

/// The potential's gradient as expressions.
std::vector<Expression> gradient_expressions(const PotentialChart& chart);

}  // namespace hessgeo
