#include "hessgeo/constructions.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "hessgeo/errors.hpp"
#include "hessgeo/parser.hpp"
#include "hessgeo/quadrature.hpp"

namespace hessgeo {

namespace {

double eval1(const Expression& e, double t) {
  const double at[1] = {t};
  return evaluate(e, at);
}

}  // namespace

WarpedSpec WarpedSpec::from_source(PotentialChart base, std::string_view warp, std::string_view inverse) {
  const std::vector<std::string> t{"t"};
  return WarpedSpec{std::move(base), parse(warp, t), parse(inverse, t)};
}

WarpedMetricCheck warped_metric_check(const WarpedSpec& spec, const Point& p) {
  const int n = spec.base.dimension();
  if (p.size() != n + 1) throw DimensionError("warped point needs base coordinates followed by t");
  const Point x = p.head(n);
  const double t = p(n);

  const double f = eval1(spec.warp, t);
  const double fprime = eval1(differentiate(spec.warp, 0), t);
  if (std::fabs(fprime) < 1e-14) throw NumericalError("warp derivative vanishes at t = " + std::to_string(t));
  const double back = eval1(spec.warp, eval1(spec.inverse, f));
  if (std::fabs(back - f) > 1e-10 * std::max(1.0, std::fabs(f))) {
    throw NumericalError("inverse expression does not invert the warp at t = " + std::to_string(t));
  }

  // Perspective part phi(y_i / y) y in the n+1 coordinates (y_1..y_n, y).
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("y" + std::to_string(i));
  names.push_back("y");
  std::vector<Expression> ys;
  for (int i = 0; i <= n; ++i) ys.push_back(Expression::variable(i, names[static_cast<std::size_t>(i)]));
  std::vector<Expression> ratios;
  for (int i = 0; i < n; ++i) ratios.push_back(ys[static_cast<std::size_t>(i)] / ys.back());
  const PotentialChart perspective("perspective", names, substitute(spec.base.potential(), ratios) * ys.back());

  const double ef = std::exp(f);
  Point y(n + 1);
  y.head(n) = ef * x;
  y(n) = ef;
  Eigen::MatrixXd hy = to_matrix(derivative_tensor(perspective, 2, y));
  const double fp_inverse = eval1(differentiate(spec.inverse, 0), std::log(ef));
  hy(n, n) += fp_inverse * fp_inverse / (ef * ef);

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 0; i < n; ++i) {
    jac(i, i) = ef;
    jac(i, n) = ef * fprime * x(i);
  }
  jac(n, n) = ef * fprime;

  WarpedMetricCheck out;
  out.pulled_back = jac.transpose() * hy * jac;
  out.expected = Eigen::MatrixXd::Zero(n + 1, n + 1);
  out.expected.topLeftCorner(n, n) = ef * to_matrix(derivative_tensor(spec.base, 2, x));
  out.expected(n, n) = 1.0;
  out.residual = (out.pulled_back - out.expected).cwiseAbs().maxCoeff();
  return out;
}

WarpedPotentialValue warped_potential_value(const WarpedSpec& spec, const Point& p, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  const int n = spec.base.dimension();
  if (p.size() != n + 1) throw DimensionError("warped point needs base coordinates followed by t");
  const double y = std::exp(eval1(spec.warp, p(n)));
  if (!(epsilon < y)) throw Error("epsilon must lie below y");
  const Expression fp = differentiate(spec.inverse, 0);
  const auto integrand = [&](double s) {
    const double d = eval1(fp, std::log(s));
    return d * d * (y - s) / (s * s);
  };
  auto integrate = [&](double a, double b) {
    const double coarse = (b - a) / 6.0 * (integrand(a) + 4.0 * integrand(0.5 * (a + b)) + integrand(b));
    const QuadratureResult q = adaptive_simpson(integrand, a, b, 1e-10 * std::max(1.0, std::fabs(coarse)), 40);
    if (!q.converged) throw NumericalError("quadrature did not converge on [" + std::to_string(a) + ", " +
                                           std::to_string(b) + "]");
    return q.value;
  };

  WarpedPotentialValue out;
  out.truncated_integral = integrate(epsilon, y);
  double total = out.truncated_integral;
  double previous = 0.0;
  double last = 0.0;
  double ratio = 0.0;
  int growing = 0;
  double lower = epsilon;
  constexpr int kMaxHalvings = 60;
  for (int k = 0; k < kMaxHalvings; ++k) {
    const double piece = integrate(0.5 * lower, lower);
    lower *= 0.5;
    out.halvings = k + 1;
    if (k > 0 && previous != 0.0) ratio = std::fabs(piece) / std::fabs(previous);
    total += piece;
    last = piece;
    if (std::fabs(piece) <= 1e-13 * (1.0 + std::fabs(total))) break;
    growing = (k > 0 && ratio > 0.95) ? growing + 1 : 0;
    if (growing >= 2) {
      out.status = IntegralStatus::kDivergent;
      break;
    }
    previous = piece;
  }
  if (out.status == IntegralStatus::kConvergent) {
    // geometric tail beyond the last piece
    if (ratio > 0.0 && ratio < 0.95) total += last * ratio / (1.0 - ratio);
    out.integral = total;
  } else {
    out.integral = out.truncated_integral;
  }
  out.value = spec.base.value(p.head(n)) * y + out.integral;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::pair<std::string_view, std::string_view> split_call(std::string_view name) {
  const auto open = name.find('(');
  if (open == std::string_view::npos) return {name, {}};
  if (name.back() != ')') throw Error("malformed catalog name '" + std::string(name) + "'");
  return {name.substr(0, open), name.substr(open + 1, name.size() - open - 2)};
}

int parse_dimension(std::string_view arg, int fallback) {
  if (arg.empty()) return fallback;
  int n = 0;
  auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
  if (ec != std::errc() || ptr != arg.data() + arg.size() || n < 1) {
    throw Error("bad dimension argument '" + std::string(arg) + "'");
  }
  return n;
}

std::vector<std::string> indexed_names(const std::string& stem, int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back(stem + std::to_string(i));
  return v;
}

}  // namespace

CatalogEntry example_catalog(std::string_view name) {
  const auto [head, arg] = split_call(name);
  const std::vector<std::string> xy{"x", "y"};

  if (head == "hyperbolic2" || head == "hyperbolic_n") {
    const int n = head == "hyperbolic2" ? 2 : parse_dimension(arg, 2);
    if (n < 2) throw Error("hyperbolic_n needs n >= 2");
    auto vars = indexed_names("y", n);
    std::string src = "(";
    for (int i = 1; i < n; ++i) src += (i > 1 ? " + " : "") + vars[static_cast<std::size_t>(i - 1)] + "^2";
    src += ")/(8*" + vars.back() + ") - 0.25*log(" + vars.back() + ")";
    const std::string dom = vars.back();
    CatalogEntry e{PotentialChart::from_source(std::string(name), vars, src, std::span(&dom, 1)), {}, {}};
    e.sample_box.lower.assign(static_cast<std::size_t>(n), -2.0);
    e.sample_box.upper.assign(static_cast<std::size_t>(n), 2.0);
    e.sample_box.lower.back() = 0.2;
    e.sample_box.upper.back() = 3.0;
    e.expected.sectional_curvature = -1.0;
    e.expected.signature = Signature{n, 0, 0};
    e.expected.note = "upper half space metric (dx_1^2 + ... + dx_n^2) / x_n^2";
    return e;
  }
  if (head == "lorentz_cone_3d") {
    const std::vector<std::string> vars{"x", "y", "t"};
    const std::vector<std::string> dom{"t^2 - x^2 - y^2", "t"};
    CatalogEntry e{PotentialChart::from_source("lorentz_cone_3d", vars, "-0.5*log(t^2 - x^2 - y^2)", dom),
                   Box{{-1.0, -1.0, 0.5}, {1.0, 1.0, 3.0}},
                   {}};
    e.expected.transverse_sectional = -1.0;
    e.expected.scalar_curvature = -2.0;
    e.expected.paper_scalar_curvature = -1.0;
    e.expected.signature = Signature{3, 0, 0};
    e.expected.note =
        "isometric to H^2 x R; the hyperbolic factor has sectional curvature -1, standard scalar curvature "
        "of the product is -2 (quoted elsewhere as -1 by adding the factor curvatures -1 + 0)";
    return e;
  }
  if (head == "lorentz_cone_2d") {
    const std::vector<std::string> vars{"x", "t"};
    const std::vector<std::string> dom{"t^2 - x^2", "t"};
    CatalogEntry e{PotentialChart::from_source("lorentz_cone_2d", vars, "-0.5*log(t^2 - x^2)", dom),
                   Box{{-1.0, 0.5}, {1.0, 3.0}},
                   {}};
    e.expected.sectional_curvature = 0.0;
    e.expected.signature = Signature{2, 0, 0};
    e.expected.note = "radiant cone potential, det Hess u = exp(4u)";
    return e;
  }
  if (head == "polar_flat") {
    const std::string dom = "y";
    CatalogEntry e{PotentialChart::from_source("polar_flat", xy, "x^2/(2*y) + 0.25*log(y)*y", std::span(&dom, 1)),
                   Box{{-2.0, 0.2}, {2.0, 3.0}},
                   {}};
    e.expected.sectional_curvature = 0.0;
    e.expected.flat = true;
    e.expected.signature = Signature{2, 0, 0};
    e.expected.note = "(x, y) = (r^2 theta, r^2) turns the metric into dr^2 + r^2 dtheta^2";
    return e;
  }
  if (head == "harmonic") {
    const std::string src = arg.empty() ? "x^3 - 3*x*y^2" : std::string(arg);
    const std::string dom = "x^2 + y^2";
    CatalogEntry e{PotentialChart::from_source("harmonic(" + src + ")", xy, src, std::span(&dom, 1)),
                   Box{{0.5, -1.0}, {2.0, 1.0}},
                   {}};
    e.expected.sectional_curvature = 0.0;
    e.expected.flat = true;
    e.expected.signature = Signature{1, 1, 0};
    e.expected.note = "nonlinear harmonic potential: Lorentzian and flat";
    return e;
  }
  if (head == "maschke_sextic") {
    const std::vector<std::string> vars{"x", "y", "z"};
    CatalogEntry e{PotentialChart::from_source("maschke_sextic", vars,
                                               "x^6 + y^6 + z^6 - 10*(x^3*y^3 + y^3*z^3 + z^3*x^3)"),
                   Box{{0.3, -1.2, 0.3}, {1.2, -0.3, 1.2}},
                   {}};
    e.expected.flat = true;
    e.expected.sectional_curvature = 0.0;
    e.expected.note = "homogeneous sextic with flat (pseudo-)Hessian metric";
    return e;
  }
  if (head == "orthant") {
    const int n = parse_dimension(arg, 2);
    auto vars = indexed_names("x", n);
    std::string src;
    for (int i = 0; i < n; ++i) src += " - log(" + vars[static_cast<std::size_t>(i)] + ")";
    CatalogEntry e{PotentialChart::from_source("orthant(" + std::to_string(n) + ")", vars, src, vars), {}, {}};
    e.sample_box.lower.assign(static_cast<std::size_t>(n), 0.2);
    e.sample_box.upper.assign(static_cast<std::size_t>(n), 3.0);
    e.expected.sectional_curvature = 0.0;
    e.expected.flat = true;
    e.expected.signature = Signature{n, 0, 0};
    e.expected.note = "metric sum dx_i^2 / x_i^2 is flat";
    return e;
  }
  if (head == "quadratic") {
    const int n = parse_dimension(arg, 2);
    auto vars = indexed_names("x", n);
    std::string src = "0.5*(";
    for (int i = 0; i < n; ++i) src += (i ? " + " : "") + vars[static_cast<std::size_t>(i)] + "^2";
    src += ")";
    CatalogEntry e{PotentialChart::from_source("quadratic(" + std::to_string(n) + ")", vars, src), {}, {}};
    e.sample_box.lower.assign(static_cast<std::size_t>(n), -2.0);
    e.sample_box.upper.assign(static_cast<std::size_t>(n), 2.0);
    e.expected.sectional_curvature = 0.0;
    e.expected.flat = true;
    e.expected.signature = Signature{n, 0, 0};
    e.expected.note = "Euclidean metric";
    return e;
  }
  if (head == "homogeneous_quartic") {
    const std::vector<std::string> dom{"x", "y"};
    CatalogEntry e{PotentialChart::from_source("homogeneous_quartic", xy, "x^4 + y^4", dom),
                   Box{{0.2, 0.2}, {2.0, 2.0}},
                   {}};
    e.expected.flat = true;
    e.expected.sectional_curvature = 0.0;
    e.expected.signature = Signature{2, 0, 0};
    e.expected.note = "homogeneous of degree 4 with nondegenerate Hessian on the open quadrant";
    return e;
  }
  throw Error("unknown catalog entry '" + std::string(name) + "'");
}

std::vector<std::string> catalog_names() {
  return {"hyperbolic2",   "hyperbolic_n(3)", "lorentz_cone_3d", "lorentz_cone_2d", "polar_flat",
          "harmonic",      "maschke_sextic",  "orthant(2)",      "quadratic(2)",    "homogeneous_quartic"};
}

// ---------------------------------------------------------------------------

Point lorentz_cone_embedding(double re_tau, double im_tau, double rho) {
  const double k = std::exp(rho) / (2.0 * im_tau);
  const double modulus_sq = re_tau * re_tau + im_tau * im_tau;
  Point p(3);
  p << k * 2.0 * re_tau, k * (modulus_sq - 1.0), k * (modulus_sq + 1.0);
  return p;
}

IsometryCheck lorentz_cone_isometry_check(const PotentialChart& chart, std::span<const Eigen::Vector3d> samples) {
  if (chart.dimension() != 3) throw DimensionError("isometry check needs the 3-dimensional cone chart");
  const Expression a = Expression::variable(0, "a");
  const Expression b = Expression::variable(1, "b");
  const Expression r = Expression::variable(2, "r");
  const Expression k = exp(r) / (2.0 * b);
  const Expression modulus_sq = power(a, {2, 1}) + power(b, {2, 1});
  const std::vector<Expression> phi{k * (2.0 * a), k * (modulus_sq - Expression::constant(1.0)),
                                    k * (modulus_sq + Expression::constant(1.0))};
  const auto jac = jacobian_expressions(phi, 3);  // jac[j][i] = d_j Phi_i

  IsometryCheck out;
  for (const auto& s : samples) {
    if (!(s(1) > 0.0)) throw Error("isometry samples need Im tau > 0");
    const Point image = evaluate_all(phi, s);
    Eigen::Matrix3d j;
    for (int col = 0; col < 3; ++col) j.col(col) = evaluate_all(jac[static_cast<std::size_t>(col)], s);
    const Eigen::MatrixXd h = to_matrix(derivative_tensor(chart, 2, image));
    const Eigen::MatrixXd pulled = j.transpose() * h * j;
    Eigen::Matrix3d product = Eigen::Matrix3d::Zero();
    product(0, 0) = product(1, 1) = 1.0 / (s(1) * s(1));
    product(2, 2) = 1.0;
    out.metric_residual = std::max(out.metric_residual, (pulled - product).cwiseAbs().maxCoeff());
    const double q = image(2) * image(2) - image(0) * image(0) - image(1) * image(1);
    out.quadric_residual = std::max(out.quadric_residual, std::fabs(q * std::exp(-2.0 * s(2)) - 1.0));
  }
  return out;
}

// ---------------------------------------------------------------------------

LoopPath deck_translation_path(double re_tau, double im_tau) {
  const Point base = lorentz_cone_embedding(re_tau, im_tau, 0.0);
  const Expression grow = exp(Expression::variable(0, "s"));
  LoopPath path;
  for (int i = 0; i < 3; ++i) path.components.push_back(base(i) * grow);
  path.deck_map = std::exp(1.0) * Eigen::MatrixXd::Identity(3, 3);
  return path;
}

Point path_point(const LoopPath& path, double s) {
  const double at[1] = {s};
  Point p(static_cast<Eigen::Index>(path.components.size()));
  for (std::size_t i = 0; i < path.components.size(); ++i) {
    p(static_cast<Eigen::Index>(i)) = evaluate(path.components[i], at);
  }
  return p;
}

double loop_period(const PotentialChart& chart, std::span<const Expression> eta, const LoopPath& path) {
  const int n = chart.dimension();
  if (static_cast<int>(eta.size()) != n || static_cast<int>(path.components.size()) != n) {
    throw DimensionError("loop_period: form and path must match the chart dimension");
  }
  constexpr int kChecks = 100;
  for (int i = 0; i <= kChecks; ++i) {
    const Point p = path_point(path, static_cast<double>(i) / kChecks);
    if (!chart.admissible(p)) throw DomainError("path", "path leaves the chart domain at s = " + std::to_string(i / 100.0));
  }
  if (path.deck_map) {
    const double mismatch = (path_point(path, 1.0) - *path.deck_map * path_point(path, 0.0)).cwiseAbs().maxCoeff();
    if (mismatch > 1e-10) throw Error("path endpoints are not related by the deck map");
  }
  std::vector<Expression> velocity;
  for (const auto& c : path.components) velocity.push_back(differentiate(c, 0));
  const auto integrand = [&](double s) {
    const double at[1] = {s};
    const Point p = path_point(path, s);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      sum += evaluate(eta[k], {p.data(), static_cast<std::size_t>(n)}) * evaluate(velocity[k], at);
    }
    return sum;
  };
  const QuadratureResult q = adaptive_simpson(integrand, 0.0, 1.0, 1e-10, 40);
  if (!q.converged) throw NumericalError("loop period quadrature did not converge");
  return q.value;
}

std::vector<Expression> gradient_expressions(const PotentialChart& chart) {
  std::vector<Expression> g;
  for (int i = 0; i < chart.dimension(); ++i) {
    const int idx[1] = {i};
    g.push_back(chart.derivative(idx));
  }
  return g;
}

double gradient_theorem_residual(const PotentialChart& chart, const LoopPath& path) {
  const auto eta = gradient_expressions(chart);
  const double period = loop_period(chart, eta, path);
  return std::fabs(period - (chart.value(path_point(path, 1.0)) - chart.value(path_point(path, 0.0))));
}

}  // namespace hessgeo
