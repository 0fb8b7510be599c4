#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "hessgeo/chart.hpp"
#include "hessgeo/conventions.hpp"
#include "hessgeo/tensor.hpp"

namespace hessgeo {

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Eigenvalue sign counts of a symmetric matrix; |lambda| <= threshold counts as zero.
Signature signature_of(const Eigen::MatrixXd& symmetric, double threshold = tol::kSignatureThreshold);

struct MetricValue {
  Eigen::MatrixXd matrix;
  Signature signature;
  double determinant = 0.0;

  bool nondegenerate() const;
  bool riemannian() const;
};

/// h = Hess f at p.
MetricValue hessian_metric(const PotentialChart& chart, const Point& p);

/// Amari-Chentsov tensor A_ijk = f_ijk and its raised form A_ij^k, stored as raised(i, j, k).
struct ACTensorValue {
  Tensor lower;
  Tensor raised;
};

ACTensorValue amari_chentsov(const PotentialChart& chart, const Point& p);

struct RiemannValue {
  Tensor components;  // R[i][j][k][l], see conventions.hpp
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
};

/// Fills Ricci and scalar curvature from lowered components and the inverse metric.
RiemannValue complete_riemann(Tensor components, const Eigen::MatrixXd& inverse_metric);

/// 4 R_ijkl = A_il^m A_jkm - A_ik^m A_jlm. Works for any nondegenerate signature.
RiemannValue riemann_closed_form(const PotentialChart& chart, const Point& p);

struct RiemannSymmetryResiduals {
  double antisymmetry_first = 0.0;  // R_ijkl + R_jikl
  double antisymmetry_last = 0.0;   // R_ijkl + R_ijlk
  double pair = 0.0;                // R_ijkl - R_klij
  double bianchi = 0.0;             // R_ijkl + R_jkil + R_kijl
  double max() const;
};

RiemannSymmetryResiduals riemann_symmetry_residuals(const Tensor& r);

/// K(X, Y) = R(X, Y, X, Y) / (h(X,X) h(Y,Y) - h(X,Y)^2).
double sectional_curvature(const Tensor& r, const Eigen::MatrixXd& metric, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y);

struct OrthonormalRicci {
  Eigen::MatrixXd ricci;
  Eigen::MatrixXd frame;  // columns are h-orthonormal
};

/// 4 Ric_ab = tr(A_a A_b) - sum_k tr(A_k) A_abk in a Cholesky orthonormal frame.
/// Riemannian metrics only.
OrthonormalRicci ricci_orthonormal(const PotentialChart& chart, const Point& p);

struct RicciBound {
  double lower = 0.0;
  double value = 0.0;
  double upper = 0.0;
  bool holds(double slack = tol::kRicciSlack) const { return lower <= value + slack && value <= upper + slack; }
};

/// (-(n-1)/2 |A|^2 h(X,X), Ric(X,X), (n-1)/4 |A|^2 h(X,X)). Riemannian metrics only.
RicciBound ricci_bound_check(const PotentialChart& chart, const Point& p, const Eigen::VectorXd& x);

/// Gaussian curvature of a 2D Hessian metric from the 3x3 determinant of
/// (f_xx f_xxx f_xxy; f_xy f_xxy f_xyy; f_yy f_xyy f_yyy) over -4 det(Hess f)^2.
double gaussian_curvature_2d(const PotentialChart& chart, const Point& p);

struct FlatnessVerdict {
  bool flat = false;
  double max_abs_curvature = 0.0;
  std::size_t used_samples = 0;
  std::vector<std::size_t> excluded;  // degenerate samples, by index
};

/// Flat iff |K| < 1e-8 at every nondegenerate sample.
FlatnessVerdict flatness_test_2d(const PotentialChart& chart, std::span<const Point> samples);

struct KoszulFormValue {
  Eigen::VectorXd covector;  // kappa_i = 1/2 d_i log|det h|
  double log_abs_det = 0.0;
  double closedness_residual = 0.0;  // max |d_i kappa_j - d_j kappa_i|
};

KoszulFormValue koszul_form(const PotentialChart& chart, const Point& p);

/// det Hess f as an expression, by cofactor expansion of the symbolic Hessian.
Expression hessian_determinant_expression(const PotentialChart& chart);

/// max_i |d_i sqrt|det h| - kappa_i sqrt|det h||, with the left side from the
/// symbolic determinant and kappa from koszul_form.
double volume_identity_residual(const PotentialChart& chart, const Point& p);

struct KoszulTypeVerdict {
  bool koszul_type = false;
  double max_closedness_residual = 0.0;
  double min_eigenvalue = 0.0;  // smallest eigenvalue of the symmetric part of (d_i eta_j)
};

/// eta is closed and (d_i eta_j) is positive definite at every sample.
KoszulTypeVerdict koszul_type_check(const PotentialChart& chart, std::span<const Expression> eta,
                                    std::span<const Point> samples);

/// (d_i e_j) as expressions.
std::vector<std::vector<Expression>> jacobian_expressions(std::span<const Expression> fields, int dimension);

}  // namespace hessgeo
