#pragma once

#include "hessgeo/chart.hpp"
#include "hessgeo/geometry.hpp"
#include "hessgeo/tensor.hpp"

namespace hessgeo {

/// Levi-Civita symbols of the Hessian metric, gamma(k, i, j) = Gamma^k_ij,
/// from Gamma_ij,l = 1/2 (d_i g_jl + d_j g_il - d_l g_ij).
struct ChristoffelValue {
  Tensor gamma;
};

ChristoffelValue christoffel(const PotentialChart& chart, const Point& p);

/// Curvature of a connection with coefficients gamma(k, i, j) and derivatives
/// dgamma(m, k, i, j) = d_m Gamma^k_ij. Returns R^l_ijk stored as (l, i, j, k).
Tensor connection_curvature(const Tensor& gamma, const Tensor& dgamma);

/// Riemann tensor via Christoffel symbols and symbolic fourth derivatives of
/// the potential, lowered into the closed-form index convention.
RiemannValue riemann_from_christoffel(const PotentialChart& chart, const Point& p);

struct FiniteDifferenceAudit {
  double max_deviation[3] = {0.0, 0.0, 0.0};  // orders 2, 3, 4
  double step_order2 = 1e-5;
  double step_order34 = 1e-4;
  double local_length = 1.0;  // steps are scaled by min(1, this)
  int retries = 0;

  double max() const;
};

/// Central differences of the symbolic order k-1 tensor compared with the
/// symbolic order k tensor, for k = 2, 3, 4. Base steps are multiplied by
/// min(1, |f2|/|f3|, |f3|/|f4|). Steps leaving the domain are
/// shrunk tenfold, at most three times.
FiniteDifferenceAudit finite_difference_audit(const PotentialChart& chart, const Point& p);

}  // namespace hessgeo
