#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hessgeo/constructions.hpp"
#include "hessgeo/errors.hpp"
#include "hessgeo/geometry.hpp"
#include "hessgeo/oracle.hpp"
#include "hessgeo/parser.hpp"
#include "hessgeo/verify_suite.hpp"
#include "support/numeric_oracle.hpp"

namespace hessgeo {
namespace {

double tensor_at(const Tensor& t, int i, int j, int k, int l) { return t(i, j, k, l); }

// Compares a library Riemann tensor with the finite-difference oracle.
double oracle_gap(const Tensor& r, const std::vector<double>& numeric) {
  const int n = r.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          worst = std::max(worst, std::fabs(tensor_at(r, i, j, k, l) - numeric[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)]));
  return worst;
}

TEST(Metric, HyperbolicHessianMatchesHandFormula) {
  const CatalogEntry e = example_catalog("hyperbolic2");
  std::mt19937_64 rng(1);
  for (const auto& p : sample_admissible(e.chart, e.sample_box, 10, rng)) {
    const MetricValue h = hessian_metric(e.chart, p);
    EXPECT_LT((h.matrix - testing::hyperbolic2_metric(p)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(h.riemannian());
    EXPECT_NEAR(h.determinant, 1.0 / (16 * std::pow(p(1), 3)), 1e-12 * std::fabs(h.determinant));
  }
}

TEST(Metric, LorentzConeHessianIsIdentityOnAxis) {
  const CatalogEntry e = example_catalog("lorentz_cone_3d");
  const MetricValue h = hessian_metric(e.chart, Eigen::Vector3d(0, 0, 1));
  EXPECT_LT((h.matrix - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Metric, SignatureCounts) {
  Eigen::Matrix3d m = Eigen::Vector3d(2.0, -1.0, 0.0).asDiagonal();
  EXPECT_EQ(signature_of(m), (Signature{1, 1, 1}));
  const auto harmonic = example_catalog("harmonic");
  EXPECT_EQ(hessian_metric(harmonic.chart, Eigen::Vector2d(1.0, 0.5)).signature, (Signature{1, 1, 0}));
}

TEST(AmariChentsov, OrthantThirdDerivative) {
  // f = -log x - log y: f_xxx = -2/x^3, raised A_xx^x = h^xx f_xxx = -2/x
  const auto e = example_catalog("orthant(2)");
  const ACTensorValue a = amari_chentsov(e.chart, Eigen::Vector2d(1.0, 1.0));
  EXPECT_DOUBLE_EQ(a.lower(0, 0, 0), -2.0);
  EXPECT_DOUBLE_EQ(a.lower(0, 0, 1), 0.0);
  const ACTensorValue b = amari_chentsov(e.chart, Eigen::Vector2d(2.0, 0.5));
  EXPECT_NEAR(b.raised(0, 0, 0), -1.0, 1e-15);
  EXPECT_NEAR(b.raised(1, 1, 1), -4.0, 1e-15);
}

TEST(Curvature, HyperbolicPlaneAgainstNumericOracle) {
  const CatalogEntry e = example_catalog("hyperbolic2");
  std::mt19937_64 rng(2);
  const Box inner{{-1.0, 0.6}, {1.0, 2.0}};
  for (const auto& p : sample_admissible(e.chart, inner, 5, rng)) {
    const auto numeric = testing::numeric_riemann(testing::hyperbolic2_metric, p);
    const RiemannValue closed = riemann_closed_form(e.chart, p);
    const RiemannValue christoffel = riemann_from_christoffel(e.chart, p);
    EXPECT_LT(oracle_gap(closed.components, numeric), 1e-6);
    EXPECT_LT(oracle_gap(christoffel.components, numeric), 1e-6);
    EXPECT_NEAR(testing::numeric_gaussian_curvature(testing::hyperbolic2_metric, p), -1.0, 1e-6);
    // Ric = -h and scalar = -2 on the hyperbolic plane
    EXPECT_LT((closed.ricci + hessian_metric(e.chart, p).matrix).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(closed.scalar, -2.0, 1e-10);
    EXPECT_NEAR(gaussian_curvature_2d(e.chart, p), -1.0, 1e-10);
  }
}

TEST(Curvature, LorentzConeAgainstNumericOracle) {
  const CatalogEntry e = example_catalog("lorentz_cone_3d");
  const Eigen::Vector3d pts[] = {{0.1, -0.2, 1.5}, {0.3, 0.2, 1.2}, {-0.4, 0.1, 2.0}};
  for (const auto& p : pts) {
    const auto numeric = testing::numeric_riemann(testing::lorentz_cone_metric, p);
    const RiemannValue closed = riemann_closed_form(e.chart, p);
    EXPECT_LT(oracle_gap(closed.components, numeric), 1e-6);
    EXPECT_NEAR(closed.scalar, -2.0, 1e-10);
  }
}

TEST(Curvature, ClosedFormEqualsChristoffelOnRandomCharts) {
  std::mt19937_64 rng(3);
  for (int c = 0; c < 10; ++c) {
    const int n = 2 + c % 3;
    const PotentialChart chart = random_polynomial_chart(rng, n, "random");
    const Box box{std::vector<double>(static_cast<std::size_t>(n), -0.5), std::vector<double>(static_cast<std::size_t>(n), 0.5)};
    for (const auto& p : nondegenerate_samples(chart, box, 5, rng)) {
      const RiemannValue a = riemann_closed_form(chart, p);
      const RiemannValue b = riemann_from_christoffel(chart, p);
      EXPECT_LT(max_abs_difference(a.components, b.components), 1e-10);
      EXPECT_LT(riemann_symmetry_residuals(a.components).max(), 1e-12);
      EXPECT_NEAR(a.scalar, b.scalar, 1e-9);
    }
  }
}

TEST(Curvature, GaussianFormulaMatchesTensorOnRandomCharts) {
  std::mt19937_64 rng(4);
  for (int c = 0; c < 10; ++c) {
    const PotentialChart chart = random_polynomial_chart(rng, 2, "random");
    const Box box{{-0.5, -0.5}, {0.5, 0.5}};
    for (const auto& p : nondegenerate_samples(chart, box, 5, rng)) {
      const RiemannValue r = riemann_closed_form(chart, p);
      const MetricValue h = hessian_metric(chart, p);
      EXPECT_NEAR(gaussian_curvature_2d(chart, p), r.components(0, 1, 0, 1) / h.determinant, 1e-9);
      EXPECT_NEAR(sectional_curvature(r.components, h.matrix, Eigen::Vector2d(1, 0), Eigen::Vector2d(0.3, 1)),
                  r.components(0, 1, 0, 1) / h.determinant, 1e-9);
    }
  }
}

TEST(Curvature, DegenerateMetricIsRejected) {
  const std::vector<std::string> xy{"x", "y"};
  const PotentialChart chart("cubic", xy, parse("x^3 + y^2", xy));
  EXPECT_THROW(riemann_closed_form(chart, Eigen::Vector2d(0.0, 1.0)), DegenerateMetricError);
  EXPECT_THROW(riemann_from_christoffel(chart, Eigen::Vector2d(0.0, 1.0)), DegenerateMetricError);
}

TEST(Ricci, OrthonormalFrameOnHyperbolicPlane) {
  const CatalogEntry e = example_catalog("hyperbolic2");
  const OrthonormalRicci r = ricci_orthonormal(e.chart, Eigen::Vector2d(0.3, 1.2));
  EXPECT_LT((r.ricci + Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-10);
  const Eigen::MatrixXd h = hessian_metric(e.chart, Eigen::Vector2d(0.3, 1.2)).matrix;
  EXPECT_LT((r.frame.transpose() * h * r.frame - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Ricci, BoundsHoldOnRandomRiemannianCharts) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  int triples = 0;
  for (int c = 0; c < 8; ++c) {
    const int n = 2 + c % 3;
    const PotentialChart chart = random_polynomial_chart(rng, n, "random");
    const Box box{std::vector<double>(static_cast<std::size_t>(n), -0.4), std::vector<double>(static_cast<std::size_t>(n), 0.4)};
    for (const auto& p : nondegenerate_samples(chart, box, 5, rng, 1e-6, true)) {
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x(i) = u(rng);
      const RicciBound b = ricci_bound_check(chart, p, x);
      EXPECT_TRUE(b.holds()) << b.lower << " <= " << b.value << " <= " << b.upper;
      // Ric(X, X) from the coordinate Ricci tensor
      EXPECT_NEAR(b.value, x.dot(riemann_closed_form(chart, p).ricci * x), 1e-10 * std::max(1.0, std::fabs(b.value)));
      ++triples;
    }
  }
  EXPECT_EQ(triples, 40);
}

TEST(Flatness, VerdictsOnCatalog) {
  std::mt19937_64 rng(6);
  const auto sample = [&](const char* name) {
    const CatalogEntry e = example_catalog(name);
    return std::make_pair(e, sample_admissible(e.chart, e.sample_box, 10, rng));
  };
  {
    const auto [e, pts] = sample("polar_flat");
    EXPECT_TRUE(flatness_test_2d(e.chart, pts).flat);
  }
  {
    const auto [e, pts] = sample("harmonic");
    EXPECT_TRUE(flatness_test_2d(e.chart, pts).flat);
  }
  {
    const auto [e, pts] = sample("hyperbolic2");
    const FlatnessVerdict v = flatness_test_2d(e.chart, pts);
    EXPECT_FALSE(v.flat);
    EXPECT_NEAR(v.max_abs_curvature, 1.0, 1e-10);
  }
  {
    // diag(12x^2, 12y^2) is the pullback of the Euclidean metric under sqrt(3)(x^2, y^2)
    const auto [e, pts] = sample("homogeneous_quartic");
    EXPECT_TRUE(flatness_test_2d(e.chart, pts).flat);
  }
}

TEST(Flatness, DegenerateSamplesAreExcluded) {
  const std::vector<std::string> xy{"x", "y"};
  const PotentialChart chart("quartic", xy, parse("x^4 + y^4", xy));
  const std::vector<Point> pts{Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(1.0, 1.0)};
  const FlatnessVerdict v = flatness_test_2d(chart, pts);
  EXPECT_EQ(v.used_samples, 1u);
  ASSERT_EQ(v.excluded.size(), 1u);
  EXPECT_EQ(v.excluded[0], 0u);
}

TEST(Koszul, LorentzConeFormIsThreeDf) {
  const CatalogEntry e = example_catalog("lorentz_cone_3d");
  const Point p = Eigen::Vector3d(0.2, -0.1, 1.4);
  const KoszulFormValue k = koszul_form(e.chart, p);
  const Eigen::VectorXd df = to_vector(derivative_tensor(e.chart, 1, p));
  EXPECT_LT((k.covector - 3.0 * df).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(k.closedness_residual, 1e-12);
  EXPECT_LT(volume_identity_residual(e.chart, p), 1e-10);
}

TEST(Koszul, DeterminantExpressionMatchesNumericDeterminant) {
  std::mt19937_64 rng(7);
  const PotentialChart chart = random_polynomial_chart(rng, 3, "random");
  const Expression det = hessian_determinant_expression(chart);
  const Point p = Eigen::Vector3d(0.1, -0.2, 0.3);
  EXPECT_NEAR(evaluate(det, std::span<const double>(p.data(), 3)), hessian_metric(chart, p).matrix.determinant(), 1e-12);
}

TEST(Koszul, TypeCheckSeparatesClosedFromRotational) {
  const CatalogEntry e = example_catalog("orthant(2)");
  std::mt19937_64 rng(8);
  const auto pts = sample_admissible(e.chart, e.sample_box, 10, rng);
  const auto df = gradient_expressions(e.chart);
  const KoszulTypeVerdict good = koszul_type_check(e.chart, df, pts);
  EXPECT_TRUE(good.koszul_type);
  EXPECT_GT(good.min_eigenvalue, 0.0);
  const std::vector<std::string> xy{"x", "y"};
  const std::vector<Expression> rot{parse("x - y", xy), parse("x + y", xy)};
  const KoszulTypeVerdict bad = koszul_type_check(e.chart, rot, pts);
  EXPECT_FALSE(bad.koszul_type);
  EXPECT_NEAR(bad.max_closedness_residual, 2.0, 1e-12);
}

TEST(Oracle, ChristoffelIsHalfAmariChentsov) {
  const CatalogEntry e = example_catalog("orthant(2)");
  const ChristoffelValue g = christoffel(e.chart, Eigen::Vector2d(1.0, 1.0));
  EXPECT_DOUBLE_EQ(g.gamma(0, 0, 0), -1.0);
  EXPECT_DOUBLE_EQ(g.gamma(0, 1, 1), 0.0);
  const auto numeric = testing::numeric_christoffel(testing::orthant_metric, Eigen::Vector2d(1.5, 0.7));
  const ChristoffelValue h = christoffel(e.chart, Eigen::Vector2d(1.5, 0.7));
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(h.gamma(k, i, j), numeric[static_cast<std::size_t>(k)](i, j), 1e-9);
}

TEST(Oracle, FiniteDifferenceAuditIsSmallAndShrinksNearBoundary) {
  const CatalogEntry e = example_catalog("lorentz_cone_3d");
  const FiniteDifferenceAudit inside = finite_difference_audit(e.chart, Eigen::Vector3d(0.0, 0.0, 1.0));
  EXPECT_LT(inside.max(), 1e-6);
  EXPECT_GT(inside.local_length, 0.1);
  // distance about 2e-3 from the cone
  const Point near = Eigen::Vector3d(0.7, 0.0, 0.702);
  const FiniteDifferenceAudit edge = finite_difference_audit(e.chart, near);
  EXPECT_LT(edge.local_length, 1e-2);
  double scale = 0.0;
  for (int k = 2; k <= 4; ++k) scale = std::max(scale, derivative_tensor(e.chart, k, near).max_abs());
  EXPECT_LT(edge.max() / scale, 1e-6);
}

}  // namespace
}  // namespace hessgeo
