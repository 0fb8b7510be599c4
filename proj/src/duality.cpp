#include "hessgeo/duality.hpp"

#include <algorithm>
#include <cmath>

#include "hessgeo/conventions.hpp"
#include "hessgeo/errors.hpp"
#include "hessgeo/geometry.hpp"
#include "hessgeo/oracle.hpp"

namespace hessgeo {

namespace {

struct LocalData {
  Eigen::MatrixXd h;
  Eigen::MatrixXd hinv;
  Tensor third;
  Tensor gamma_star;
};

LocalData local_data(const PotentialChart& chart, const Point& p) {
  const MetricValue h = hessian_metric(chart, p);
  if (!h.nondegenerate()) throw DegenerateMetricError("degenerate Hessian in duality check");
  LocalData d{h.matrix, h.matrix.inverse(), derivative_tensor(chart, 3, p), Tensor(chart.dimension(), 3)};
  const int n = chart.dimension();
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += d.hinv(k, l) * d.third(l, i, j);
        d.gamma_star(k, i, j) = s;
      }
    }
  }
  return d;
}

// d_j (h^kl) = -h^ka f_abj h^bl
Eigen::MatrixXd inverse_metric_derivative(const LocalData& d, int j) {
  const int n = static_cast<int>(d.h.rows());
  Eigen::MatrixXd dh(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) dh(a, b) = d.third(a, b, j);
  }
  return -d.hinv * dh * d.hinv;
}

}  // namespace

ConjugateConnectionValue conjugate_connection(const PotentialChart& chart, const Point& p) {
  LocalData d = local_data(chart, p);
  const int n = chart.dimension();
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double rhs = 0.0;
        for (int l = 0; l < n; ++l) rhs += d.h(i, l) * d.gamma_star(l, k, j);
        worst = std::max(worst, std::fabs(d.third(i, j, k) - rhs));
      }
    }
  }
  return {std::move(d.gamma_star), worst};
}

double dual_flatness_check(const PotentialChart& chart, std::span<const Point> samples) {
  const int n = chart.dimension();
  double worst = 0.0;
  for (const auto& p : samples) {
    const LocalData d = local_data(chart, p);
    const Tensor fourth = derivative_tensor(chart, 4, p);
    // d_m Gamma*^k_ij = d_m(h^kl) f_lij + h^kl f_lijm
    Tensor dgamma(n, 4);
    for (int m = 0; m < n; ++m) {
      const Eigen::MatrixXd dhinv = inverse_metric_derivative(d, m);
      for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int l = 0; l < n; ++l) s += dhinv(k, l) * d.third(l, i, j) + d.hinv(k, l) * fourth(l, i, j, m);
            dgamma(m, k, i, j) = s;
          }
        }
      }
    }
    worst = std::max(worst, connection_curvature(d.gamma_star, dgamma).max_abs());
  }
  return worst;
}

double levi_civita_average_residual(const PotentialChart& chart, const Point& p) {
  const LocalData d = local_data(chart, p);
  const ChristoffelValue lc = christoffel(chart, p);
  const int n = chart.dimension();
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        worst = std::max(worst, std::fabs(0.5 * (0.0 + d.gamma_star(k, i, j)) - lc.gamma(k, i, j)));
      }
    }
  }
  return worst;
}

EulerFieldValue legendre_euler_field(const PotentialChart& chart, const Point& p) {
  const LocalData d = local_data(chart, p);
  const int n = chart.dimension();
  const Eigen::VectorXd df = to_vector(derivative_tensor(chart, 1, p));
  EulerFieldValue out;
  out.field = d.hinv * df;
  out.defect = Eigen::MatrixXd(n, n);
  for (int j = 0; j < n; ++j) {
    // d_j H^k = d_j(h^kl) f_l + h^kl f_lj
    const Eigen::VectorXd dH = inverse_metric_derivative(d, j) * df + d.hinv * d.h.col(j);
    for (int k = 0; k < n; ++k) {
      double cov = dH(k);
      for (int m = 0; m < n; ++m) cov += d.gamma_star(k, j, m) * out.field(m);
      out.defect(k, j) = cov - (k == j ? 1.0 : 0.0);
    }
  }
  out.defect_norm = out.defect.cwiseAbs().maxCoeff();
  return out;
}

RadiantDualValue radiant_to_koszul(const PotentialChart& chart, std::span<const Expression> euler_field,
                                   const Point& p) {
  const int n = chart.dimension();
  if (static_cast<int>(euler_field.size()) != n) throw DimensionError("Euler field needs one component per coordinate");
  const LocalData d = local_data(chart, p);
  const auto jac = jacobian_expressions(euler_field, n);  // jac[i][k] = d_i H^k
  const Eigen::VectorXd field = evaluate_all(euler_field, p);
  Eigen::MatrixXd dfield(n, n);  // (i, k)
  for (int i = 0; i < n; ++i) {
    dfield.row(i) = evaluate_all(jac[static_cast<std::size_t>(i)], p).transpose();
  }

  RadiantDualValue out;
  out.euler_defect_norm = (dfield - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  out.is_euler = out.euler_defect_norm < tol::kDualDefect;
  out.covector = d.h * field;
  out.defect = Eigen::MatrixXd(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // d_i theta_j = f_jmi H^m + f_jm d_i H^m
      double dtheta = 0.0;
      for (int m = 0; m < n; ++m) dtheta += d.third(j, m, i) * field(m) + d.h(j, m) * dfield(i, m);
      double conn = 0.0;
      for (int m = 0; m < n; ++m) conn += d.gamma_star(m, i, j) * out.covector(m);
      out.defect(i, j) = dtheta - conn - d.h(i, j);
    }
  }
  out.defect_norm = out.defect.cwiseAbs().maxCoeff();
  return out;
}

double musical_sharp_commutation(const PotentialChart& chart, std::span<const Expression> theta, const Point& p) {
  const int n = chart.dimension();
  if (static_cast<int>(theta.size()) != n) throw DimensionError("covector field needs one component per coordinate");
  const LocalData d = local_data(chart, p);
  const auto jac = jacobian_expressions(theta, n);  // jac[j][i] = d_j theta_i
  const Eigen::VectorXd th = evaluate_all(theta, p);
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXd dth = evaluate_all(jac[static_cast<std::size_t>(j)], p);
    // flat connection has zero coefficients: D_j theta^sharp = d_j (h^-1 theta)
    const Eigen::VectorXd lhs = inverse_metric_derivative(d, j) * th + d.hinv * dth;
    Eigen::VectorXd cov(n);
    for (int i = 0; i < n; ++i) {
      double s = dth(i);
      for (int m = 0; m < n; ++m) s -= d.gamma_star(m, j, i) * th(m);
      cov(i) = s;
    }
    const Eigen::VectorXd rhs = d.hinv * cov;
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace hessgeo
