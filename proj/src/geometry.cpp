#include "hessgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hessgeo/errors.hpp"

namespace hessgeo {

namespace {

std::string point_text(const Point& p) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(p(i));
  }
  return s + ")";
}

Eigen::MatrixXd require_inverse(const MetricValue& h, const Point& p) {
  if (!h.nondegenerate()) {
    throw DegenerateMetricError("degenerate Hessian at " + point_text(p) + " (|det| = " +
                                std::to_string(std::fabs(h.determinant)) + ")");
  }
  return h.matrix.inverse();
}

void require_riemannian(const MetricValue& h, const Point& p) {
  if (!h.riemannian()) {
    throw UnsupportedSignatureError("metric at " + point_text(p) +
                                    " is not positive definite; use riemann_closed_form instead");
  }
}

ACTensorValue raise_third(Tensor lower, const Eigen::MatrixXd& hinv) {
  const int n = lower.dim();
  Tensor raised(n, 3);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += lower(i, j, l) * hinv(l, k);
        raised(i, j, k) = s;
      }
    }
  }
  return {std::move(lower), std::move(raised)};
}

double determinant_2x2(const Tensor& h) { return h(0, 0) * h(1, 1) - h(0, 1) * h(0, 1); }

}  // namespace

Signature signature_of(const Eigen::MatrixXd& symmetric, double threshold) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  Signature s;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda > threshold) {
      ++s.positive;
    } else if (lambda < -threshold) {
      ++s.negative;
    } else {
      ++s.zero;
    }
  }
  return s;
}

bool MetricValue::nondegenerate() const { return std::fabs(determinant) > tol::kDegenerateDeterminant; }

bool MetricValue::riemannian() const {
  return nondegenerate() && signature.positive == static_cast<int>(matrix.rows());
}

MetricValue hessian_metric(const PotentialChart& chart, const Point& p) {
  MetricValue m;
  m.matrix = to_matrix(derivative_tensor(chart, 2, p));
  m.signature = signature_of(m.matrix);
  m.determinant = m.matrix.determinant();
  return m;
}

ACTensorValue amari_chentsov(const PotentialChart& chart, const Point& p) {
  const MetricValue h = hessian_metric(chart, p);
  const Eigen::MatrixXd hinv = require_inverse(h, p);
  return raise_third(derivative_tensor(chart, 3, p), hinv);
}

RiemannValue complete_riemann(Tensor components, const Eigen::MatrixXd& inverse_metric) {
  const int n = components.dim();
  RiemannValue out;
  out.ricci = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) s += inverse_metric(i, k) * components(i, j, k, l);
      }
      out.ricci(j, l) = s;
    }
  }
  out.scalar = (inverse_metric.cwiseProduct(out.ricci)).sum();
  out.components = std::move(components);
  return out;
}

RiemannValue riemann_closed_form(const PotentialChart& chart, const Point& p) {
  const MetricValue h = hessian_metric(chart, p);
  const Eigen::MatrixXd hinv = require_inverse(h, p);
  const ACTensorValue a = raise_third(derivative_tensor(chart, 3, p), hinv);
  const int n = chart.dimension();
  Tensor r(n, 4);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) {
            s += a.raised(i, l, m) * a.lower(j, k, m) - a.raised(i, k, m) * a.lower(j, l, m);
          }
          r(i, j, k, l) = 0.25 * s;
        }
      }
    }
  }
  return complete_riemann(std::move(r), hinv);
}

double RiemannSymmetryResiduals::max() const {
  return std::max({antisymmetry_first, antisymmetry_last, pair, bianchi});
}

RiemannSymmetryResiduals riemann_symmetry_residuals(const Tensor& r) {
  const int n = r.dim();
  RiemannSymmetryResiduals res;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          res.antisymmetry_first = std::max(res.antisymmetry_first, std::fabs(r(i, j, k, l) + r(j, i, k, l)));
          res.antisymmetry_last = std::max(res.antisymmetry_last, std::fabs(r(i, j, k, l) + r(i, j, l, k)));
          res.pair = std::max(res.pair, std::fabs(r(i, j, k, l) - r(k, l, i, j)));
          res.bianchi = std::max(res.bianchi, std::fabs(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l)));
        }
      }
    }
  }
  return res;
}

double sectional_curvature(const Tensor& r, const Eigen::MatrixXd& metric, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y) {
  const int n = r.dim();
  double num = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) num += r(i, j, k, l) * x(i) * y(j) * x(k) * y(l);
      }
    }
  }
  const double hxx = x.dot(metric * x);
  const double hyy = y.dot(metric * y);
  const double hxy = x.dot(metric * y);
  const double area = hxx * hyy - hxy * hxy;
  if (std::fabs(area) <= std::numeric_limits<double>::epsilon()) {
    throw DegenerateMetricError("sectional curvature of a degenerate plane");
  }
  return num / area;
}

OrthonormalRicci ricci_orthonormal(const PotentialChart& chart, const Point& p) {
  const MetricValue h = hessian_metric(chart, p);
  require_riemannian(h, p);
  const int n = chart.dimension();
  const Eigen::LLT<Eigen::MatrixXd> llt(h.matrix);
  if (llt.info() != Eigen::Success) throw UnsupportedSignatureError("Cholesky factorization failed");
  const Eigen::MatrixXd lower = llt.matrixL();
  const Eigen::MatrixXd frame = lower.transpose().triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(n, n));

  const Tensor a = derivative_tensor(chart, 3, p);
  Tensor af(n, 3);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      for (int z = 0; z < n; ++z) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) s += a(i, j, k) * frame(i, x) * frame(j, y) * frame(k, z);
          }
        }
        af(x, y, z) = s;
      }
    }
  }
  Eigen::VectorXd traces = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) {
    for (int c = 0; c < n; ++c) traces(k) += af(k, c, c);
  }
  Eigen::MatrixXd ric(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      double tr = 0.0;
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) tr += af(x, c, d) * af(y, d, c);
      }
      double contraction = 0.0;
      for (int k = 0; k < n; ++k) contraction += traces(k) * af(x, y, k);
      ric(x, y) = 0.25 * (tr - contraction);
    }
  }
  return {ric, frame};
}

RicciBound ricci_bound_check(const PotentialChart& chart, const Point& p, const Eigen::VectorXd& x) {
  const MetricValue h = hessian_metric(chart, p);
  require_riemannian(h, p);
  if (x.size() != chart.dimension() || x.norm() == 0.0) throw Error("ricci_bound_check needs a nonzero vector");
  const int n = chart.dimension();
  const Eigen::MatrixXd hinv = h.matrix.inverse();
  const Tensor a = derivative_tensor(chart, 3, p);
  double norm_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          for (int m = 0; m < n; ++m) {
            for (int q = 0; q < n; ++q) norm_sq += a(i, j, k) * a(l, m, q) * hinv(i, l) * hinv(j, m) * hinv(k, q);
          }
        }
      }
    }
  }
  const RiemannValue r = riemann_closed_form(chart, p);
  const double hxx = x.dot(h.matrix * x);
  RicciBound b;
  b.lower = -0.5 * (n - 1) * norm_sq * hxx;
  b.value = x.dot(r.ricci * x);
  b.upper = 0.25 * (n - 1) * norm_sq * hxx;
  return b;
}

double gaussian_curvature_2d(const PotentialChart& chart, const Point& p) {
  if (chart.dimension() != 2) throw DimensionError("gaussian_curvature_2d needs a 2-dimensional chart");
  const Tensor h = derivative_tensor(chart, 2, p);
  const double det = determinant_2x2(h);
  if (std::fabs(det) <= tol::kDegenerateDeterminant) {
    throw DegenerateMetricError("degenerate Hessian at " + point_text(p));
  }
  const Tensor t = derivative_tensor(chart, 3, p);
  Eigen::Matrix3d m;
  m << h(0, 0), t(0, 0, 0), t(0, 0, 1),  //
      h(0, 1), t(0, 0, 1), t(0, 1, 1),   //
      h(1, 1), t(0, 1, 1), t(1, 1, 1);
  return -m.determinant() / (4.0 * det * det);
}

FlatnessVerdict flatness_test_2d(const PotentialChart& chart, std::span<const Point> samples) {
  if (chart.dimension() != 2) throw DimensionError("flatness_test_2d needs a 2-dimensional chart");
  FlatnessVerdict v;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Tensor h = derivative_tensor(chart, 2, samples[s]);
    if (std::fabs(determinant_2x2(h)) <= tol::kDegenerateDeterminant) {
      v.excluded.push_back(s);
      continue;
    }
    v.max_abs_curvature = std::max(v.max_abs_curvature, std::fabs(gaussian_curvature_2d(chart, samples[s])));
    ++v.used_samples;
  }
  if (v.used_samples == 0) throw DegenerateMetricError("no nondegenerate samples for flatness test");
  v.flat = v.max_abs_curvature < tol::kFlatCurvature;
  return v;
}

KoszulFormValue koszul_form(const PotentialChart& chart, const Point& p) {
  const MetricValue h = hessian_metric(chart, p);
  const Eigen::MatrixXd hinv = require_inverse(h, p);
  const int n = chart.dimension();
  const Tensor a = derivative_tensor(chart, 3, p);
  const Tensor b = derivative_tensor(chart, 4, p);

  // Jacobi: d_i log|det h| = tr(h^-1 d_i h).
  KoszulFormValue out;
  out.covector = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::MatrixXd> slices(static_cast<std::size_t>(n), Eigen::MatrixXd(n, n));
  for (int i = 0; i < n; ++i) {
    auto& s = slices[static_cast<std::size_t>(i)];
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) s(x, y) = a(x, y, i);
    }
    out.covector(i) = 0.5 * (hinv * s).trace();
  }
  out.log_abs_det = std::log(std::fabs(h.determinant));

  // d_i kappa_j = 1/2 (tr(h^-1 d_ij h) - tr(h^-1 d_i h h^-1 d_j h)).
  Eigen::MatrixXd dk(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double second = 0.0;
      for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) second += hinv(x, y) * b(y, x, i, j);
      }
      const auto& si = slices[static_cast<std::size_t>(i)];
      const auto& sj = slices[static_cast<std::size_t>(j)];
      dk(i, j) = 0.5 * (second - (hinv * si * hinv * sj).trace());
    }
  }
  out.closedness_residual = (dk - dk.transpose()).cwiseAbs().maxCoeff();
  return out;
}

namespace {

Expression cofactor_determinant(const std::vector<std::vector<Expression>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  std::vector<Expression> terms;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Expression>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Expression> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(m[r][k]);
      }
      minor.push_back(std::move(row));
    }
    Expression term = m[0][c] * cofactor_determinant(minor);
    terms.push_back(c % 2 == 0 ? term : negate(term));
  }
  return add(std::move(terms));
}

}  // namespace

Expression hessian_determinant_expression(const PotentialChart& chart) {
  const int n = chart.dimension();
  std::vector<std::vector<Expression>> m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int idx[2] = {i, j};
      m[static_cast<std::size_t>(i)].push_back(chart.derivative(idx));
    }
  }
  return cofactor_determinant(m);
}

double volume_identity_residual(const PotentialChart& chart, const Point& p) {
  const int n = chart.dimension();
  const Expression det = hessian_determinant_expression(chart);
  const std::span<const double> at{p.data(), static_cast<std::size_t>(n)};
  const double d = evaluate(det, at);
  if (std::fabs(d) <= tol::kDegenerateDeterminant) throw DegenerateMetricError("degenerate Hessian at " + point_text(p));
  const double root = std::sqrt(std::fabs(d));
  const double sign = d > 0 ? 1.0 : -1.0;
  const KoszulFormValue kappa = koszul_form(chart, p);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lhs = sign * evaluate(differentiate(det, i), at) / (2.0 * root);
    worst = std::max(worst, std::fabs(lhs - kappa.covector(i) * root));
  }
  return worst;
}

std::vector<std::vector<Expression>> jacobian_expressions(std::span<const Expression> fields, int dimension) {
  std::vector<std::vector<Expression>> jac(static_cast<std::size_t>(dimension));
  for (int i = 0; i < dimension; ++i) {
    for (const auto& f : fields) jac[static_cast<std::size_t>(i)].push_back(differentiate(f, i));
  }
  return jac;
}

KoszulTypeVerdict koszul_type_check(const PotentialChart& chart, std::span<const Expression> eta,
                                    std::span<const Point> samples) {
  const int n = chart.dimension();
  if (static_cast<int>(eta.size()) != n) throw DimensionError("covector field needs one component per coordinate");
  const auto jac = jacobian_expressions(eta, n);
  KoszulTypeVerdict v;
  v.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& p : samples) {
    const std::span<const double> at{p.data(), static_cast<std::size_t>(n)};
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d(i, j) = evaluate(jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], at);
    }
    v.max_closedness_residual = std::max(v.max_closedness_residual, (d - d.transpose()).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd sym = 0.5 * (d + d.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    v.min_eigenvalue = std::min(v.min_eigenvalue, solver.eigenvalues().minCoeff());
  }
  v.koszul_type = !samples.empty() && v.max_closedness_residual < tol::kClosedness &&
                  v.min_eigenvalue > tol::kPositiveDefinite;
  return v;
}

}  // namespace hessgeo
