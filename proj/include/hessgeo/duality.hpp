#pragma once

#include <Eigen/Dense>

#include <span>

#include "hessgeo/chart.hpp"
#include "hessgeo/tensor.hpp"

namespace hessgeo {

/// Coefficients of the conjugate connection in the affine coordinates of the
/// flat connection: Gamma*^k_ij = A_ij^k, stored as gamma_star(k, i, j).
struct ConjugateConnectionValue {
  Tensor gamma_star;
  /// max |d_k h_ij - h_il Gamma*^l_kj|: the defining identity
  /// Z h(X,Y) = h(D_Z X, Y) + h(X, D*_Z Y) on coordinate fields.
  double duality_residual = 0.0;
};

ConjugateConnectionValue conjugate_connection(const PotentialChart& chart, const Point& p);

/// Largest component of the curvature of the conjugate connection over the samples.
double dual_flatness_check(const PotentialChart& chart, std::span<const Point> samples);

/// max |1/2 (0 + Gamma*) - Gamma_LeviCivita| at p.
double levi_civita_average_residual(const PotentialChart& chart, const Point& p);

struct EulerFieldValue {
  Eigen::VectorXd field;   // H = (df)^sharp
  Eigen::MatrixXd defect;  // (D*_j H)^k - delta^k_j, stored (k, j)
  double defect_norm = 0.0;
};

/// Checks that the sharp of the 1-form potential df is an Euler field of the
/// conjugate connection.
EulerFieldValue legendre_euler_field(const PotentialChart& chart, const Point& p);

struct RadiantDualValue {
  Eigen::VectorXd covector;  // H^flat
  Eigen::MatrixXd defect;    // (D* H^flat)_ij - h_ij
  double defect_norm = 0.0;
  double euler_defect_norm = 0.0;  // max |d_j H^k - delta^k_j|
  bool is_euler = false;
};

/// Checks that the flat of an Euler field H of the flat connection is a 1-form
/// potential for the conjugate connection. A non-Euler H is reported through
/// is_euler, separately from the identity defect.
RadiantDualValue radiant_to_koszul(const PotentialChart& chart, std::span<const Expression> euler_field,
                                   const Point& p);

/// max over coordinate directions of |(D_X theta^sharp)^k - ((D*_X theta)^sharp)^k|.
double musical_sharp_commutation(const PotentialChart& chart, std::span<const Expression> theta, const Point& p);

}  // namespace hessgeo
