#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hessgeo/constructions.hpp"
#include "hessgeo/errors.hpp"
#include "hessgeo/geometry.hpp"
#include "hessgeo/parser.hpp"
#include "hessgeo/quadrature.hpp"
#include "support/numeric_oracle.hpp"

namespace hessgeo {
namespace {

TEST(Quadrature, AdaptiveSimpson) {
  const QuadratureResult a = adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  EXPECT_TRUE(a.converged);
  EXPECT_NEAR(a.value, 2.0, 1e-10);
  const QuadratureResult b = adaptive_simpson([](double x) { return std::sqrt(x); }, 0.0, 1.0);
  EXPECT_NEAR(b.value, 2.0 / 3.0, 1e-9);
  const QuadratureResult c = adaptive_simpson([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, 1e-12, 3);
  EXPECT_FALSE(c.converged);
}

TEST(Catalog, EveryEntryBuildsAndUnknownNamesFail) {
  for (const auto& name : catalog_names()) {
    const CatalogEntry e = example_catalog(name);
    EXPECT_EQ(static_cast<int>(e.sample_box.lower.size()), e.chart.dimension()) << name;
  }
  EXPECT_THROW(example_catalog("no_such_chart"), Error);
  EXPECT_EQ(example_catalog("orthant(4)").chart.dimension(), 4);
  EXPECT_EQ(example_catalog("hyperbolic_n(3)").chart.dimension(), 3);
}

TEST(Catalog, ExpectedCurvatureHoldsAtSamples) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const auto& name : catalog_names()) {
    const CatalogEntry e = example_catalog(name);
    const int n = e.chart.dimension();
    for (const auto& p : sample_admissible(e.chart, e.sample_box, 5, rng)) {
      const MetricValue h = hessian_metric(e.chart, p);
      if (!h.nondegenerate()) continue;
      const RiemannValue r = riemann_closed_form(e.chart, p);
      if (e.expected.signature) EXPECT_EQ(h.signature, *e.expected.signature) << name;
      if (e.expected.scalar_curvature) EXPECT_NEAR(r.scalar, *e.expected.scalar_curvature, 1e-8) << name;
      if (e.expected.flat && *e.expected.flat) EXPECT_LT(r.components.max_abs(), 1e-7) << name;
      if (e.expected.sectional_curvature && n >= 2) {
        Eigen::VectorXd x(n), y(n);
        for (int i = 0; i < n; ++i) {
          x(i) = u(rng);
          y(i) = u(rng);
        }
        EXPECT_NEAR(sectional_curvature(r.components, h.matrix, x, y), *e.expected.sectional_curvature, 1e-8) << name;
      }
    }
  }
}

// phi = x^2/2, f = log t, F = exp: F'(log s) = s, so I(y) = int_0^y (y - s) ds = y^2/2 and
// phi_hat(y1, y) = y1^2 / (2y) + y^2 / 2 with y1 = t x, y = t.
TEST(Warped, QuadraticBaseLogWarpByHand) {
  const PotentialChart line = example_catalog("quadratic(1)").chart;
  const WarpedSpec spec = WarpedSpec::from_source(line, "log(t)", "exp(t)");
  const testing::ScalarFn phi_hat = [](const Eigen::VectorXd& q) { return q(0) * q(0) / (2 * q(1)) + q(1) * q(1) / 2; };
  for (const auto& [x, t] : {std::pair{0.3, 1.5}, std::pair{-0.8, 0.7}, std::pair{0.0, 2.0}}) {
    Point p(2);
    p << x, t;
    // independent route: numeric Hessian of phi_hat pulled back by J = d(y1, y)/d(x, t)
    Eigen::Matrix2d j;
    j << t, x, 0, 1;
    const Eigen::Matrix2d pulled = j.transpose() * testing::numeric_hessian(phi_hat, Eigen::Vector2d(t * x, t)) * j;
    const Eigen::Matrix2d expected = Eigen::Vector2d(t, 1.0).asDiagonal();
    EXPECT_LT((pulled - expected).cwiseAbs().maxCoeff(), 1e-8);

    const WarpedMetricCheck m = warped_metric_check(spec, p);
    EXPECT_LT((m.expected - expected).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((m.pulled_back - expected).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(m.residual, 1e-12);

    const WarpedPotentialValue v = warped_potential_value(spec, p, 1e-3);
    EXPECT_EQ(v.status, IntegralStatus::kConvergent);
    EXPECT_NEAR(v.integral, t * t / 2, 1e-8);
    EXPECT_NEAR(v.value, phi_hat(Eigen::Vector2d(t * x, t)), 1e-8);
  }
}

TEST(Warped, DivergentIntegralsAreFlagged) {
  const PotentialChart line = example_catalog("quadratic(1)").chart;
  Point p(2);
  p << 0.2, 1.0;
  // F'(log s)^2 (y - s) / s^2 behaves like c / s^2 at 0 for linear warps
  for (const auto& [f, inv] : {std::pair{"t", "t"}, std::pair{"2*t", "t/2"}}) {
    const WarpedSpec spec = WarpedSpec::from_source(line, f, inv);
    EXPECT_EQ(warped_potential_value(spec, p, 1e-3).status, IntegralStatus::kDivergent) << f;
    EXPECT_LT(warped_metric_check(spec, p).residual, 1e-10) << f;
  }
}

TEST(Warped, MismatchedInverseIsRejected) {
  const PotentialChart line = example_catalog("quadratic(1)").chart;
  const WarpedSpec spec = WarpedSpec::from_source(line, "log(t)", "2*exp(t)");
  Point p(2);
  p << 0.1, 1.2;
  EXPECT_THROW(warped_metric_check(spec, p), NumericalError);
}

TEST(LorentzCone, EmbeddingLiesOnScaledQuadric) {
  for (const auto& [a, b, rho] : {std::tuple{0.3, 0.8, -0.2}, std::tuple{-1.0, 1.7, 0.4}}) {
    const Point p = lorentz_cone_embedding(a, b, rho);
    const double q = p(2) * p(2) - p(0) * p(0) - p(1) * p(1);
    EXPECT_NEAR(q, std::exp(2 * rho), 1e-13);
    EXPECT_GT(p(2), 0.0);
  }
}

TEST(LorentzCone, IsometryWithHyperbolicPlaneTimesLine) {
  const CatalogEntry e = example_catalog("lorentz_cone_3d");
  std::vector<Eigen::Vector3d> taus{{0.1, 0.5, 0.0}, {-0.7, 1.3, 0.3}, {0.4, 2.0, -0.4}};
  const IsometryCheck iso = lorentz_cone_isometry_check(e.chart, taus);
  EXPECT_LT(iso.metric_residual, 1e-12);
  EXPECT_LT(iso.quadric_residual, 1e-13);

  // numeric pullback of the hand-written cone metric
  for (const auto& s : taus) {
    const auto phi = [](const Eigen::VectorXd& v) { return Eigen::VectorXd(lorentz_cone_embedding(v(0), v(1), v(2))); };
    Eigen::Matrix3d j;
    for (int c = 0; c < 3; ++c) j.col(c) = testing::central_diff(phi, Eigen::VectorXd(s), c, 1e-3);
    const Eigen::Matrix3d pulled = j.transpose() * testing::lorentz_cone_metric(phi(s)) * j;
    const Eigen::Matrix3d expected = Eigen::Vector3d(1 / (s(1) * s(1)), 1 / (s(1) * s(1)), 1.0).asDiagonal();
    EXPECT_LT((pulled - expected).cwiseAbs().maxCoeff(), 1e-9);
  }

  // negative control: the wrong sign of the potential is not an isometry
  const PotentialChart flipped = e.chart.with_potential(-e.chart.potential(), "flipped");
  EXPECT_GT(lorentz_cone_isometry_check(flipped, taus).metric_residual, 1e-2);
}

// f(e p) - f(p) = -1/2 log(e^2 Q) + 1/2 log Q = -1
TEST(LoopPeriod, DeckTranslationOfLorentzCone) {
  const CatalogEntry e = example_catalog("lorentz_cone_3d");
  const LoopPath path = deck_translation_path(0.2, 0.9);
  ASSERT_TRUE(path.deck_map.has_value());
  const Point start = path_point(path, 0.0);
  const Point end = path_point(path, 1.0);
  EXPECT_LT((end - std::numbers::e * start).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((end - *path.deck_map * start).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(loop_period(e.chart, gradient_expressions(e.chart), path), -1.0, 1e-10);
  EXPECT_LT(gradient_theorem_residual(e.chart, path), 1e-10);
}

TEST(LoopPeriod, AngularFormAroundOrigin) {
  const CatalogEntry e = example_catalog("harmonic");  // domain x^2 + y^2 > 0
  const std::vector<std::string> xy{"x", "y"};
  const std::vector<Expression> dtheta{parse("-y/(x^2 + y^2)", xy), parse("x/(x^2 + y^2)", xy)};
  const std::vector<std::string> s{"s"};
  LoopPath circle;
  circle.components = {parse("2*cos(6.283185307179586*s)", s), parse("2*sin(6.283185307179586*s)", s)};
  EXPECT_NEAR(loop_period(e.chart, dtheta, circle), 2 * std::numbers::pi, 1e-9);
  // a loop that misses the origin has period 0
  LoopPath shifted;
  shifted.components = {parse("3 + cos(6.283185307179586*s)", s), parse("sin(6.283185307179586*s)", s)};
  EXPECT_NEAR(loop_period(e.chart, dtheta, shifted), 0.0, 1e-9);
}

TEST(LoopPeriod, PathLeavingDomainThrows) {
  const CatalogEntry e = example_catalog("lorentz_cone_3d");
  const std::vector<std::string> s{"s"};
  LoopPath out;
  out.components = {parse("2*s", s), parse("0*s", s), parse("1 + 0*s", s)};
  EXPECT_THROW(loop_period(e.chart, gradient_expressions(e.chart), out), DomainError);
}

}  // namespace
}  // namespace hessgeo
