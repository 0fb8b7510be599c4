#include "hessgeo/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "hessgeo/errors.hpp"

namespace hessgeo {

namespace {

struct MetricData {
  Eigen::MatrixXd h;
  Eigen::MatrixXd hinv;
  Tensor dh;  // dh(a, b, m) = d_m h_ab
};

MetricData metric_data(const PotentialChart& chart, const Point& p) {
  const MetricValue h = hessian_metric(chart, p);
  if (!h.nondegenerate()) throw DegenerateMetricError("degenerate Hessian in Christoffel oracle");
  return {h.matrix, h.matrix.inverse(), derivative_tensor(chart, 3, p)};
}

// Gamma_ij,l = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
Tensor first_kind(const Tensor& dg) {
  const int n = dg.dim();
  Tensor out(n, 3);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) out(i, j, l) = 0.5 * (dg(j, l, i) + dg(i, l, j) - dg(i, j, l));
    }
  }
  return out;
}

Tensor raise_first_kind(const Tensor& lower, const Eigen::MatrixXd& hinv) {
  const int n = lower.dim();
  Tensor gamma(n, 3);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += hinv(k, l) * lower(i, j, l);
        gamma(k, i, j) = s;
      }
    }
  }
  return gamma;
}

}  // namespace

ChristoffelValue christoffel(const PotentialChart& chart, const Point& p) {
  const MetricData m = metric_data(chart, p);
  return {raise_first_kind(first_kind(m.dh), m.hinv)};
}

Tensor connection_curvature(const Tensor& gamma, const Tensor& dgamma) {
  const int n = gamma.dim();
  Tensor r(n, 4);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double s = dgamma(i, l, j, k) - dgamma(j, l, i, k);
          for (int m = 0; m < n; ++m) s += gamma(l, i, m) * gamma(m, j, k) - gamma(l, j, m) * gamma(m, i, k);
          r(l, i, j, k) = s;
        }
      }
    }
  }
  return r;
}

RiemannValue riemann_from_christoffel(const PotentialChart& chart, const Point& p) {
  const MetricData m = metric_data(chart, p);
  const int n = chart.dimension();
  const Tensor d2g = derivative_tensor(chart, 4, p);  // d2g(a, b, m, q) = d_m d_q h_ab
  const Tensor lower = first_kind(m.dh);
  const Tensor gamma = raise_first_kind(lower, m.hinv);

  // d_m Gamma^k_ij = (d_m h^kl) Gamma_ij,l + h^kl d_m Gamma_ij,l,
  // d_m h^kl = -h^ka (d_m h_ab) h^bl.
  Tensor dgamma(n, 4);
  for (int mm = 0; mm < n; ++mm) {
    Eigen::MatrixXd dh(n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) dh(a, b) = m.dh(a, b, mm);
    }
    const Eigen::MatrixXd dhinv = -m.hinv * dh * m.hinv;
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            const double dlower = 0.5 * (d2g(j, l, i, mm) + d2g(i, l, j, mm) - d2g(i, j, l, mm));
            s += dhinv(k, l) * lower(i, j, l) + m.hinv(k, l) * dlower;
          }
          dgamma(mm, k, i, j) = s;
        }
      }
    }
  }

  const Tensor up = connection_curvature(gamma, dgamma);
  // R[i][j][k][l] = h_km R^m_ijl
  Tensor r(n, 4);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int q = 0; q < n; ++q) s += m.h(k, q) * up(q, i, j, l);
          r(i, j, k, l) = s;
        }
      }
    }
  }
  return complete_riemann(std::move(r), m.hinv);
}

double FiniteDifferenceAudit::max() const {
  return std::max({max_deviation[0], max_deviation[1], max_deviation[2]});
}

FiniteDifferenceAudit finite_difference_audit(const PotentialChart& chart, const Point& p) {
  chart.require_admissible(p);
  const int n = chart.dimension();
  FiniteDifferenceAudit audit;

  // Near the domain boundary derivatives grow like inverse powers of the
  // distance; the ratio of consecutive derivative sizes tracks that distance.
  const double m2 = derivative_tensor(chart, 2, p).max_abs();
  const double m3 = derivative_tensor(chart, 3, p).max_abs();
  const double m4 = derivative_tensor(chart, 4, p).max_abs();
  double length = 1.0;
  if (m3 > 0.0) length = std::min(length, m2 / m3);
  if (m4 > 0.0) length = std::min(length, m3 / m4);
  audit.local_length = length;

  for (int order = 2; order <= 4; ++order) {
    const double base_step = (order == 2 ? audit.step_order2 : audit.step_order34) * length;
    double step = base_step;
    bool inside = false;
    for (int attempt = 0; attempt <= 3; ++attempt) {
      inside = true;
      for (int i = 0; i < n && inside; ++i) {
        Point plus = p, minus = p;
        plus(i) += step;
        minus(i) -= step;
        inside = chart.admissible(plus) && chart.admissible(minus);
      }
      if (inside) break;
      if (attempt == 3) break;
      step *= 0.1;
      ++audit.retries;
    }
    if (!inside) throw NumericalError("finite-difference stencil leaves the chart domain");
    if (order == 2) audit.step_order2 = step;
    if (order >= 3) audit.step_order34 = step;

    const Tensor exact = derivative_tensor(chart, order, p);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      Point plus = p, minus = p;
      plus(i) += step;
      minus(i) -= step;
      const Tensor hi = derivative_tensor(chart, order - 1, plus);
      const Tensor lo = derivative_tensor(chart, order - 1, minus);
      const auto hd = hi.data();
      const auto ld = lo.data();
      const auto ed = exact.data();
      // exact(..., i) is the last-index slice; lower tensors are laid out contiguously.
      for (std::size_t k = 0; k < hd.size(); ++k) {
        const double fd = (hd[k] - ld[k]) / (2.0 * step);
        worst = std::max(worst, std::fabs(fd - ed[k * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)]));
      }
    }
    audit.max_deviation[order - 2] = worst;
  }
  return audit;
}

}  // namespace hessgeo
