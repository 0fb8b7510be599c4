// Acceptance gate: one PASS/FAIL line per criterion, each followed by the
// measured quantities it was decided on.
//
//   acceptance [--criterion N]...   (default: all nine)

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "hessgeo/cli.hpp"
#include "hessgeo/constructions.hpp"
#include "hessgeo/duality.hpp"
#include "hessgeo/geometry.hpp"
#include "hessgeo/monge_ampere.hpp"
#include "hessgeo/oracle.hpp"
#include "hessgeo/report.hpp"
#include "hessgeo/verify_suite.hpp"
#include "support/numeric_oracle.hpp"

namespace hessgeo {
namespace {

using Clock = std::chrono::steady_clock;

struct Measure {
  std::string name;
  double value = 0.0;
  std::string bound;
  bool pass = false;
  std::string note;
};

class Criterion {
 public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  void at_most(std::string name, double value, double bound, std::string note = {}) {
    add(std::move(name), value, fmt::format("<= {:g}", bound), std::isfinite(value) && value <= bound, std::move(note));
  }
  void at_least(std::string name, double value, double bound, std::string note = {}) {
    add(std::move(name), value, fmt::format(">= {:g}", bound), std::isfinite(value) && value >= bound, std::move(note));
  }
  void within(std::string name, double value, double lo, double hi, std::string note = {}) {
    add(std::move(name), value, fmt::format("in [{:g}, {:g}]", lo, hi), value >= lo && value <= hi, std::move(note));
  }
  void holds(std::string name, bool ok, std::string note = {}) {
    add(std::move(name), ok ? 1.0 : 0.0, "== 1", ok, std::move(note));
  }
  void error(const std::exception& e) { add("exception", std::numeric_limits<double>::quiet_NaN(), "", false, e.what()); }

  bool pass() const {
    return !measures_.empty() && std::all_of(measures_.begin(), measures_.end(), [](const Measure& m) { return m.pass; });
  }

  void print(std::ostream& out, double seconds) const {
    out << fmt::format("{} criterion {}: {} ({:.2f} s)\n", pass() ? "PASS" : "FAIL", id_, title_, seconds);
    for (const auto& m : measures_) {
      out << fmt::format("    {:<4} {:<44} {:<13.5e} {}\n", m.pass ? "ok" : "bad", m.name, m.value, m.bound);
      if (!m.note.empty()) out << "         " << m.note << '\n';
    }
  }

 private:
  void add(std::string name, double value, std::string bound, bool pass, std::string note) {
    measures_.push_back({std::move(name), value, std::move(bound), pass, std::move(note)});
  }

  int id_;
  std::string title_;
  std::vector<Measure> measures_;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Box cube(int n, double lo, double hi) {
  return Box{std::vector<double>(static_cast<std::size_t>(n), lo), std::vector<double>(static_cast<std::size_t>(n), hi)};
}

// ---------------------------------------------------------------------------

void hyperbolic_plane(Criterion& c) {
  std::mt19937_64 rng(1001);
  const auto start = Clock::now();
  const CatalogEntry e = example_catalog("hyperbolic2");
  const auto pts = sample_admissible(e.chart, e.sample_box, 20, rng);
  double worst = 0.0;
  for (const auto& p : pts) {
    const RiemannValue r = riemann_closed_form(e.chart, p);
    const Eigen::MatrixXd h = hessian_metric(e.chart, p).matrix;
    worst = std::max(worst, std::fabs(sectional_curvature(r.components, h, Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)) + 1.0));
  }
  const double elapsed = seconds_since(start);
  c.at_most("max |K + 1|, 20 random points", worst, 1e-8);
  c.at_most("runtime (s)", elapsed, 1.0);

  // second route: finite differences of the hand-written metric, steps scaled by y
  double oracle = 0.0;
  for (const auto& p : pts) {
    const double y = p(1);
    const auto r = testing::numeric_riemann(testing::hyperbolic2_metric, p, 0.01 * y, 0.001 * y);
    oracle = std::max(oracle, std::fabs(r[5] / testing::hyperbolic2_metric(p).determinant() + 1.0));
  }
  c.at_most("oracle: finite-difference |K + 1|", oracle, 1e-5, "truncation-limited second route");
}

void lorentz_cone(Criterion& c) {
  std::mt19937_64 rng(1002);
  const CatalogEntry e = example_catalog("lorentz_cone_3d");
  std::vector<Eigen::Vector3d> taus;
  for (int i = 0; i < 20; ++i) {
    const double re = uniform(rng, -1, 1);
    const double im = uniform(rng, 0.3, 2.0);
    const double rho = uniform(rng, -0.5, 0.5);
    taus.emplace_back(re, im, rho);
  }
  c.at_most("(a) isometry residual, 20 samples", lorentz_cone_isometry_check(e.chart, taus).metric_residual, 1e-8);

  const auto phi = [](const Eigen::VectorXd& v) { return Eigen::VectorXd(lorentz_cone_embedding(v(0), v(1), v(2))); };
  double h2 = 0.0, scalar = 0.0, kappa = 0.0;
  double smin = std::numeric_limits<double>::infinity(), smax = -smin;
  for (const auto& s : taus) {
    const Point p = phi(s);
    const RiemannValue r = riemann_closed_form(e.chart, p);
    const Eigen::MatrixXd h = hessian_metric(e.chart, p).matrix;
    // tangent plane of the H^2 factor, by finite differences of the embedding
    const Eigen::VectorXd da = testing::central_diff(phi, Eigen::VectorXd(s), 0, 1e-3);
    const Eigen::VectorXd db = testing::central_diff(phi, Eigen::VectorXd(s), 1, 1e-3);
    h2 = std::max(h2, std::fabs(sectional_curvature(r.components, h, da, db) + 1.0));
    scalar = std::max(scalar, std::fabs(r.scalar + 2.0));
    smin = std::min(smin, r.scalar);
    smax = std::max(smax, r.scalar);
    const Eigen::VectorXd df = to_vector(derivative_tensor(e.chart, 1, p));
    kappa = std::max(kappa, (koszul_form(e.chart, p).covector - 3.0 * df).cwiseAbs().maxCoeff());
  }
  c.at_most("(b) |K + 1| on the H^2 factor", h2, 1e-8);
  c.at_most("(b) |scalar + 2|, standard normalization", scalar, 1e-8,
            "the -1 quoted with the example is the sum of the factor curvatures (-1 + 0)");
  c.at_most("(b) scalar max - min over samples", smax - smin, 1e-8);

  double period = 0.0;
  const auto eta = gradient_expressions(e.chart);
  for (int i = 0; i < 3; ++i) {
    const auto& s = taus[static_cast<std::size_t>(i)];
    period = std::max(period, std::fabs(loop_period(e.chart, eta, deck_translation_path(s(0), s(1))) + 1.0));
  }
  c.at_most("(c) |period of df + 1|, deck translation", period, 1e-8);
  c.at_most("(d) max |kappa - 3 df|", kappa, 1e-8);
}

void closed_form_vs_oracle(Criterion& c) {
  std::mt19937_64 rng(1003);
  const auto start = Clock::now();
  double worst = 0.0;
  int points = 0;
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 2;
    const PotentialChart chart = random_polynomial_chart(rng, n, fmt::format("random_{}", k));
    for (const auto& p : nondegenerate_samples(chart, cube(n, -0.5, 0.5), 20, rng)) {
      worst = std::max(worst, max_abs_difference(riemann_closed_form(chart, p).components,
                                                 riemann_from_christoffel(chart, p).components));
      ++points;
    }
  }
  const double elapsed = seconds_since(start);
  c.at_most("max componentwise |closed form - Christoffel|", worst, 1e-8);
  c.at_least("points (50 charts x 20)", points, 1000);
  c.at_most("runtime (s)", elapsed, 30.0);
}

// Re and Im of (x + i y)^k built by the recurrence z^{k+1} = z^k (x + i y).
std::pair<Expression, Expression> complex_power(const Expression& x, const Expression& y, int k) {
  Expression re = x, im = y;
  for (int j = 1; j < k; ++j) {
    const Expression next_re = re * x - im * y;
    const Expression next_im = re * y + im * x;
    re = next_re;
    im = next_im;
  }
  return {re, im};
}

void flatness(Criterion& c) {
  std::mt19937_64 rng(1004);
  {
    const CatalogEntry e = example_catalog("polar_flat");
    double worst = 0.0;
    for (const auto& p : sample_admissible(e.chart, e.sample_box, 20, rng))
      worst = std::max(worst, std::fabs(gaussian_curvature_2d(e.chart, p)));
    c.at_most("polar example max |K|", worst, 1e-9);
  }
  {
    const std::vector<std::string> xy{"x", "y"};
    const Expression x = Expression::variable(0, "x"), y = Expression::variable(1, "y");
    std::vector<Expression> potentials{exp(x) * cos(y), exp(x) * sin(y), log(x * x + y * y), x / (x * x + y * y)};
    for (int k = 3; k <= 6; ++k) {
      const auto [re, im] = complex_power(x, y, k);
      potentials.push_back(uniform(rng, -1, 1) * re + uniform(rng, -1, 1) * im);
    }
    double worst = 0.0;
    int wrong_signature = 0, used = 0;
    for (const auto& f : potentials) {
      const PotentialChart chart("harmonic", xy, f, {x * x + y * y});
      for (const auto& p : nondegenerate_samples(chart, Box{{0.5, -1.0}, {2.0, 1.0}}, 10, rng)) {
        worst = std::max(worst, std::fabs(gaussian_curvature_2d(chart, p)));
        wrong_signature += hessian_metric(chart, p).signature == Signature{1, 1, 0} ? 0 : 1;
        ++used;
      }
    }
    c.at_most(fmt::format("harmonic max |K| ({} potentials, {} points)", potentials.size(), used), worst, 1e-8);
    c.at_most("harmonic samples with signature != (1,1)", wrong_signature, 0);
  }
  {
    const CatalogEntry e = example_catalog("maschke_sextic");
    double worst = 0.0;
    for (const auto& p : nondegenerate_samples(e.chart, e.sample_box, 20, rng))
      worst = std::max(worst, riemann_closed_form(e.chart, p).components.max_abs());
    c.at_most("Maschke sextic max |R_ijkl|, 20 points", worst, 1e-7);
  }
  {
    const CatalogEntry e = example_catalog("homogeneous_quartic");
    const FlatnessVerdict v = flatness_test_2d(e.chart, sample_admissible(e.chart, e.sample_box, 20, rng));
    c.holds("negative control: x^4 + y^4 reports non-flat", !v.flat,
            fmt::format("detector reports max |K| = {:.3e}: Hess = diag(12x^2, 12y^2) is the pullback of "
                        "du^2 + dv^2 under (u, v) = sqrt(3) (x^2, y^2), so the metric is flat",
                        v.max_abs_curvature));
  }
  {
    const CatalogEntry e = example_catalog("hyperbolic2");
    const FlatnessVerdict v = flatness_test_2d(e.chart, sample_admissible(e.chart, e.sample_box, 20, rng));
    c.holds("curved control: hyperbolic2 reports non-flat", !v.flat);
  }
}

void duality(Criterion& c) {
  std::mt19937_64 rng(1005);
  for (const char* name : {"lorentz_cone_3d", "orthant(3)", "lorentz_cone_2d"}) {
    const CatalogEntry e = example_catalog(name);
    const auto pts = sample_admissible(e.chart, e.sample_box, 20, rng);
    double product = 0.0, average = 0.0, leg1 = 0.0, leg2 = 0.0;
    for (const auto& p : pts) {
      product = std::max(product, conjugate_connection(e.chart, p).duality_residual);
      average = std::max(average, levi_civita_average_residual(e.chart, p));
      leg1 = std::max(leg1, legendre_euler_field(e.chart, p).defect_norm);
      leg2 = std::max(leg2, radiant_to_koszul(e.chart, e.chart.variable_expressions(), p).defect_norm);
    }
    const std::string n(name);
    c.at_most(n + " dual curvature", dual_flatness_check(e.chart, pts), 1e-8);
    c.at_most(n + " duality product rule", product, 1e-9);
    c.at_most(n + " (Gamma + Gamma*)/2 - Levi-Civita", average, 1e-10);
    c.at_most(n + " Legendre_1 defect", leg1, 1e-8);
    c.at_most(n + " Legendre_2 defect", leg2, 1e-8);
  }
}

void cheng_yau(Criterion& c) {
  std::mt19937_64 rng(1006);
  const auto start = Clock::now();
  for (Cone cone : {Cone::kOrthant, Cone::kLorentz}) {
    const std::string name = cone_name(cone);
    const PotentialChart chart = exact_solution_chart(cone);
    const Box box = cone == Cone::kOrthant ? Box{{0.2, 0.2}, {3.0, 3.0}} : Box{{-0.5, 1.0}, {0.5, 3.0}};
    const auto pts = sample_admissible(chart, box, 50, rng);
    double pde = 0.0;
    for (const auto& p : pts) pde = std::max(pde, exact_pde_residual(cone, p));
    c.at_most(name + " exact PDE residual (symbolic)", pde, 1e-12);
    c.at_most(name + " unit covector identities (exact)", unit_covector_check(chart, pts).max(), 1e-10);

    double errors[3] = {0, 0, 0};
    const int ms[3] = {17, 33, 65};
    MASolution fine;
    for (int k = 0; k < 3; ++k) {
      ConeProblem problem;
      problem.cone = cone;
      problem.window = default_window(cone);
      problem.resolution = ms[k];
      MASolution s = solve(problem);
      if (!s.converged) throw NumericalError(fmt::format("{} m = {} did not converge", name, ms[k]));
      errors[k] = max_error(s);
      if (k == 2) fine = std::move(s);
    }
    c.at_most(name + " L-infinity error, m = 33", errors[1], 5e-4);
    c.within(name + " error ratio m = 17 -> 33", errors[0] / errors[1], 3.2, 4.8);
    c.within(name + " error ratio m = 33 -> 65", errors[1] / errors[2], 3.2, 4.8);
    c.at_most(name + " unit covector identities (grid, m = 65)", unit_covector_check(fine).max(), 1e-3);
  }
  c.at_most("runtime (s)", seconds_since(start), 60.0);
}

void warped(Criterion& c) {
  std::mt19937_64 rng(1007);
  const std::pair<const char*, const char*> warps[] = {{"t", "t"}, {"2*t", "t/2"}, {"log(t)", "exp(t)"}, {"t^3", "t^(1/3)"}};
  double worst = 0.0;
  int count = 0;
  for (const char* base : {"quadratic(1)", "quadratic(2)", "orthant(2)", "hyperbolic2", "polar_flat"}) {
    const CatalogEntry e = example_catalog(base);
    for (const auto& [f, inv] : warps) {
      const WarpedSpec spec = WarpedSpec::from_source(e.chart, f, inv);
      for (const auto& x : sample_admissible(e.chart, e.sample_box, 5, rng)) {
        Point p(x.size() + 1);
        p.head(x.size()) = x;
        p(x.size()) = uniform(rng, 0.5, 2.0);
        const WarpedMetricCheck m = warped_metric_check(spec, p);
        worst = std::max(worst, relative(m.residual, m.expected.cwiseAbs().maxCoeff()));
        ++count;
      }
    }
  }
  c.at_most(fmt::format("metric identity residual ({} samples, relative)", count), worst, 1e-8);

  const PotentialChart line = example_catalog("quadratic(1)").chart;
  Point p(2);
  p << 0.0, 1.0;
  const WarpedPotentialValue half = warped_potential_value(WarpedSpec::from_source(line, "log(t)", "exp(t)"), p, 1e-3);
  c.at_most("closed-form case |I(1) - 1/2|", std::fabs(half.integral - 0.5), 1e-8);
  c.holds("closed-form case reported convergent", half.status == IntegralStatus::kConvergent);
  p << 0.0, 0.0;
  const WarpedPotentialValue div = warped_potential_value(WarpedSpec::from_source(line, "t", "t"), p, 1e-3);
  c.holds("f(t) = t integral flagged divergent", div.status == IntegralStatus::kDivergent);
}

void ricci_bounds(Criterion& c) {
  std::mt19937_64 rng(1008);
  std::vector<std::pair<PotentialChart, Box>> charts;
  for (const char* name : {"hyperbolic2", "hyperbolic_n(3)", "lorentz_cone_3d", "orthant(3)", "polar_flat", "quadratic(3)"}) {
    CatalogEntry e = example_catalog(name);
    charts.emplace_back(e.chart, e.sample_box);
  }
  for (int k = 0; k < 10; ++k) {
    const int n = 2 + k % 3;
    charts.emplace_back(random_polynomial_chart(rng, n, fmt::format("random_{}", k)), cube(n, -0.4, 0.4));
  }
  int triples = 0, violations = 0;
  for (const auto& [chart, box] : charts) {
    const int n = chart.dimension();
    for (const auto& p : nondegenerate_samples(chart, box, 10, rng, 1e-6, true)) {
      for (int k = 0; k < 4; ++k) {
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x(i) = uniform(rng, -1, 1);
        const RicciBound b = ricci_bound_check(chart, p, x);
        violations += b.holds() ? 0 : 1;
        ++triples;
      }
    }
  }
  c.at_most("violations of lower <= Ric(X,X) <= upper", violations, 0);
  c.at_least("(chart, point, X) triples", triples, 500);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism(Criterion& c) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "hessgeo_acceptance_run1.json";
  const auto b = dir / "hessgeo_acceptance_run2.json";
  int codes[2] = {-1, -1};
  for (int run = 0; run < 2; ++run) {
    const std::string path = (run == 0 ? a : b).string();
    const char* argv[] = {"hessgeo", "verify-paper", "--json", path.c_str()};
    std::ostringstream out, err;
    codes[run] = run_cli(4, argv, out, err);
  }
  const std::string ja = read_file(a), jb = read_file(b);
  c.at_least("JSON size (bytes)", static_cast<double>(ja.size()), 1000);
  c.holds("verify-paper JSON byte-identical across two runs", !ja.empty() && ja == jb);
  c.holds("both runs exit 0", codes[0] == 0 && codes[1] == 0);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

struct Entry {
  const char* title;
  std::function<void(Criterion&)> body;
};

const Entry kCriteria[] = {
    {"hyperbolic chart has sectional curvature -1", hyperbolic_plane},
    {"Lorentz cone isometry, curvature, deck period, Koszul form", lorentz_cone},
    {"closed-form Riemann tensor equals the Christoffel oracle", closed_form_vs_oracle},
    {"flatness suite", flatness},
    {"duality suite", duality},
    {"Cheng-Yau exact solutions and solver", cheng_yau},
    {"warped product metric identity and integral", warped},
    {"Ricci bounds", ricci_bounds},
    {"verify-paper determinism", determinism},
};

}  // namespace
}  // namespace hessgeo

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criterion to run (repeatable)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  bool all = true;
  for (int id : selected) {
    const auto& entry = hessgeo::kCriteria[id - 1];
    hessgeo::Criterion c(id, entry.title);
    const auto start = hessgeo::Clock::now();
    try {
      entry.body(c);
    } catch (const std::exception& e) {
      c.error(e);
    }
    c.print(std::cout, hessgeo::seconds_since(start));
    all &= c.pass();
  }
  return all ? 0 : 1;
}
