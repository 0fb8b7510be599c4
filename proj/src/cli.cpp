#include "hessgeo/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "hessgeo/constructions.hpp"
#include "hessgeo/errors.hpp"
#include "hessgeo/monge_ampere.hpp"
#include "hessgeo/potential_file.hpp"
#include "hessgeo/report.hpp"
#include "hessgeo/verify_suite.hpp"

namespace hessgeo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// "-" writes to `out`.
void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path);
  file << text;
  if (!file) throw Error("failed writing " + path);
}

struct SampleFlags {
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::string json;
};

void add_sample_flags(CLI::App* cmd, SampleFlags& flags) {
  cmd->add_option("--samples", flags.samples, "number of random samples drawn from the file's box")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", flags.seed, "seed for the 64-bit Mersenne Twister (default: the file's seed, else 42)");
  cmd->add_option("--json", flags.json, "write the JSON report to PATH ('-' for stdout)");
}

std::string verdict_summary(const Json& verdicts) {
  std::string s;
  for (const auto& v : verdicts) {
    if (!v["pass"].get<bool>()) s += " FAIL:" + v["check"].get<std::string>();
  }
  return s.empty() ? " all checks pass" : s;
}

int cmd_analyze(const std::string& path, const SampleFlags& flags, std::ostream& out) {
  const auto start = Clock::now();
  const PotentialFile file = load_potential_file(path);
  const PotentialChart chart = file.chart();
  const auto samples = file.samples(flags.samples, flags.seed);
  const Report report = analyze_samples(chart, samples);
  out << fmt::format("chart {} ({} variables), {} samples\n", chart.name(), chart.dimension(), samples.size());
  for (const auto& rec : report.json["points"]) {
    const auto& sig = rec["signature"];
    const auto& curv = rec["curvature"];
    out << fmt::format("  #{:<3} signature ({},{},{})  scalar {:+.10e}  max|R| {:.3e} {}\n",
                       rec["index"].get<std::size_t>(), sig["positive"].get<int>(), sig["negative"].get<int>(),
                       sig["zero"].get<int>(), curv["scalar"].get<double>(), curv["riemann_max_abs"].get<double>(),
                       verdict_summary(rec["verdicts"]));
  }
  for (const auto& d : report.json["degenerate_points"]) {
    out << fmt::format("  #{:<3} skipped: {}\n", d["index"].get<std::size_t>(), d["reason"].get<std::string>());
  }
  out << fmt::format("flat: {}  all checks pass: {}  ({:.3f} s)\n", report.json["summary"]["flat"].get<bool>(),
                     report.all_pass, seconds_since(start));
  if (!flags.json.empty()) write_text(flags.json, dump(report.json), out);
  return report.all_pass ? kExitSuccess : kExitCheckFailure;
}

int cmd_flatness(const std::string& path, const SampleFlags& flags, const std::string& expect, std::ostream& out) {
  const PotentialFile file = load_potential_file(path);
  const PotentialChart chart = file.chart();
  const Report report = flatness_report(chart, file.samples(flags.samples, flags.seed));
  const bool flat = report.json["flat"].get<bool>();
  out << fmt::format("chart {}: {} ({} = {:.3e}, tolerance {:g}, {} degenerate samples skipped)\n", chart.name(),
                     flat ? "flat" : "not flat", report.json["measure"].get<std::string>(),
                     report.json["max_abs_curvature"].get<double>(), tol::kFlatCurvature,
                     report.json["degenerate_points"].size());
  if (!flags.json.empty()) write_text(flags.json, dump(report.json), out);
  if (!report.all_pass) {
    out << "no nondegenerate samples\n";
    return kExitCheckFailure;
  }
  if (expect == "flat" && !flat) return kExitCheckFailure;
  if (expect == "curved" && flat) return kExitCheckFailure;
  return kExitSuccess;
}

int cmd_legendre(const std::string& path, const SampleFlags& flags, std::ostream& out) {
  const PotentialFile file = load_potential_file(path);
  const PotentialChart chart = file.chart();
  const Report report = legendre_report(chart, file.samples(flags.samples, flags.seed));
  out << fmt::format("chart {}: {} samples\n", chart.name(), report.json["points"].size());
  for (const auto& rec : report.json["points"]) {
    out << fmt::format("  #{:<3}", rec["index"].get<std::size_t>());
    for (const auto& v : rec["verdicts"]) {
      out << fmt::format(" {}={:.2e}{}", v["check"].get<std::string>(), v["residual"].get<double>(),
                         v["pass"].get<bool>() ? "" : "(FAIL)");
    }
    out << '\n';
  }
  out << fmt::format("all checks pass: {}\n", report.all_pass);
  if (!flags.json.empty()) write_text(flags.json, dump(report.json), out);
  return report.all_pass ? kExitSuccess : kExitCheckFailure;
}

int cmd_warp(const std::string& base, const std::string& warp, const std::string& inverse,
             const std::vector<double>& t_range, double epsilon, const SampleFlags& flags, std::ostream& out) {
  const PotentialFile file = load_potential_file(base);
  const WarpedSpec spec = WarpedSpec::from_source(file.chart(), warp, inverse);
  const auto xs = file.samples(flags.samples, flags.seed);
  std::mt19937_64 rng(flags.seed.value_or(file.seed) + 1);
  std::uniform_real_distribution<double> t_dist(t_range[0], t_range[1]);
  std::vector<Point> pts;
  for (const auto& x : xs) {
    Point p(x.size() + 1);
    p.head(x.size()) = x;
    p(x.size()) = t_dist(rng);
    pts.push_back(p);
  }
  const Report report = warp_report(spec, pts, epsilon);
  out << fmt::format("warp f(t) = {}, inverse F = {} over {}\n", to_string(spec.warp), to_string(spec.inverse),
                     spec.base.name());
  for (const auto& rec : report.json["points"]) {
    const auto& v = rec["verdicts"][0];
    out << fmt::format("  #{:<3} metric residual {:.3e}{}  integral {}\n", rec["index"].get<std::size_t>(),
                       v["residual"].get<double>(), v["pass"].get<bool>() ? "" : " (FAIL)",
                       rec["integral"]["status"].get<std::string>());
  }
  out << fmt::format("all checks pass: {}\n", report.all_pass);
  if (!flags.json.empty()) write_text(flags.json, dump(report.json), out);
  return report.all_pass ? kExitSuccess : kExitCheckFailure;
}

int cmd_verify(double scale, const std::string& json, std::optional<int> only, std::ostream& out) {
  const SuiteOptions options{scale};
  SuiteResult result;
  for (int c = 1; c <= kCriterionCount; ++c) {
    if (only && *only != c) continue;
    const auto start = Clock::now();
    auto checks = criterion_checks(c, options);
    const double elapsed = seconds_since(start);
    bool pass = true;
    for (auto& check : checks) {
      out << check_line(check) << '\n';
      pass &= check.pass;
      result.all_pass &= check.pass;
      result.checks.push_back(std::move(check));
    }
    out << fmt::format("{} criterion {} ({:.2f} s)\n", pass ? "PASS" : "FAIL", c, elapsed);
  }
  out << fmt::format("{}: {} checks, {} failed\n", result.all_pass ? "ALL PASS" : "FAILURES", result.checks.size(),
                     std::count_if(result.checks.begin(), result.checks.end(), [](const auto& c) { return !c.pass; }));
  if (!json.empty()) write_text(json, dump(suite_json(result, options)), out);
  return result.all_pass ? kExitSuccess : kExitCheckFailure;
}

int cmd_cheng_yau(const std::string& cone_text, const std::vector<double>& window, int resolution,
                  const std::string& guess, const std::string& csv, std::ostream& out) {
  ConeProblem problem;
  problem.cone = parse_cone(cone_text);
  problem.window = window.empty() ? default_window(problem.cone) : Window{window[0], window[1], window[2], window[3]};
  problem.resolution = resolution;
  problem.guess = guess == "perturbed" ? InitialGuess::kPerturbedExact : InitialGuess::kQuadraticInterpolant;
  problem.validate();
  const auto start = Clock::now();
  const MASolution s = solve(problem);
  const double elapsed = seconds_since(start);
  const auto names = cone_variables(problem.cone);
  out << fmt::format("cone {} window {} in [{}, {}], {} in [{}, {}], m = {}\n", cone_name(problem.cone), names[0],
                     problem.window.lo1, problem.window.hi1, names[1], problem.window.lo2, problem.window.hi2,
                     resolution);
  for (const auto& step : s.trace) {
    out << fmt::format("  iteration {:2d}: max|G| = {:.3e}, damping {:g}\n", step.iteration, step.residual,
                       step.damping);
  }
  const UnitCovectorResidual uc = unit_covector_check(s);
  out << fmt::format("converged: {}  iterations: {}  max|G|: {:.3e}  min Hessian eigenvalue: {:.6g}\n", s.converged,
                     s.iterations, s.residual_norm, s.min_hessian_eigenvalue);
  out << fmt::format("L-infinity error vs exact solution: {:.6e}\n", max_error(s));
  out << fmt::format("unit covector residuals: |<du,H^-1 du>-1| {:.3e}  |<du,x>+1| {:.3e}  |H^-1 du + x| {:.3e}\n",
                     uc.gradient_norm, uc.euler, uc.sharp);
  out << fmt::format("solve time: {:.3f} s\n", elapsed);
  if (!csv.empty()) {
    std::ostringstream buf;
    write_csv(s, buf);
    write_text(csv, buf.str(), out);
  }
  if (!s.converged) {
    out << "Newton iteration did not reach max|G| < 1e-10 within 50 iterations\n";
    return kExitNumerical;
  }
  return kExitSuccess;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hessian geometry toolkit: curvature, duality and Cheng-Yau checks for potentials", "hessgeo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

  std::string file;
  SampleFlags flags;

  auto* analyze = app.add_subcommand("analyze", "metric, curvature, Koszul form and checks at sample points");
  analyze->add_option("file", file, "potential file")->required();
  add_sample_flags(analyze, flags);

  double scale = 1.0;
  std::string suite_json_path;
  std::optional<int> only;
  auto* verify = app.add_subcommand("verify-paper", "run the golden verification suite");
  verify->add_option("--tolerance-scale", scale, "multiply every tolerance by T")->check(CLI::PositiveNumber);
  verify->add_option("--json", suite_json_path, "write the suite result as JSON ('-' for stdout)");
  verify->add_option("--criterion", only, "run one criterion only")->check(CLI::Range(1, kCriterionCount));

  std::string cone, csv, guess = "quadratic";
  std::vector<double> window;
  int resolution = 33;
  auto* cy = app.add_subcommand("cheng-yau", "solve det Hess u = e^{4u} on a window of a planar cone");
  cy->add_option("--cone", cone, "orthant or lorentz")->required()->check(CLI::IsMember({"orthant", "lorentz"}));
  cy->add_option("--window", window, "a,b,c,d: first coordinate in [a,b], second in [c,d]")
      ->delimiter(',')
      ->expected(4);
  cy->add_option("--resolution", resolution, "interior nodes per axis (>= 9)");
  cy->add_option("--guess", guess, "initial guess")->check(CLI::IsMember({"quadratic", "perturbed"}));
  cy->add_option("--csv", csv, "write the grid as CSV ('-' for stdout)");

  std::string expect;
  auto* flatness = app.add_subcommand("flatness", "decide whether the Hessian metric is flat on the samples");
  flatness->add_option("file", file, "potential file")->required();
  flatness->add_option("--expect", expect, "exit 1 unless the verdict matches")
      ->check(CLI::IsMember({"flat", "curved"}));
  add_sample_flags(flatness, flags);

  auto* legendre = app.add_subcommand("legendre", "dual connection and Legendre identities on the samples");
  legendre->add_option("file", file, "potential file")->required();
  add_sample_flags(legendre, flags);

  std::string warp_expr, inverse_expr;
  std::vector<double> t_range{0.5, 2.0};
  double epsilon = 1e-3;
  auto* warp = app.add_subcommand("warp", "warped-product metric identity and integral convergence");
  warp->add_option("--base", file, "potential file of the base")->required();
  warp->add_option("--warp-expr", warp_expr, "f(t)")->required();
  warp->add_option("--inverse-expr", inverse_expr, "F(t), the inverse of f, also written in t")->required();
  warp->add_option("--t-range", t_range, "lo,hi for the sampled t")->delimiter(',')->expected(2);
  warp->add_option("--epsilon", epsilon, "starting lower limit of the integral")->check(CLI::PositiveNumber);
  add_sample_flags(warp, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (*analyze) return cmd_analyze(file, flags, out);
    if (*verify) return cmd_verify(scale, suite_json_path, only, out);
    if (*cy) return cmd_cheng_yau(cone, window, resolution, guess, csv, out);
    if (*flatness) return cmd_flatness(file, flags, expect, out);
    if (*legendre) return cmd_legendre(file, flags, out);
    if (*warp) {
      if (!(t_range[0] < t_range[1])) throw ValidationError("--t-range needs lo < hi");
      return cmd_warp(file, warp_expr, inverse_expr, t_range, epsilon, flags, out);
    }
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DegenerateMetricError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hessgeo
