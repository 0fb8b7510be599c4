#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hessgeo/chart.hpp"
#include "hessgeo/report.hpp"

namespace hessgeo {

/// One golden check: value must lie in [lower, upper] (missing bounds are
/// open). Upper bounds of scaled checks are multiplied by the tolerance scale;
/// interval checks and negative controls are not scaled.
struct CheckResult {
  int criterion = 0;
  std::string id;
  std::string description;
  double value = 0.0;
  std::optional<double> lower;
  std::optional<double> upper;
  bool pass = false;
  std::string note;
};

struct SuiteOptions {
  double tolerance_scale = 1.0;
};

struct SuiteResult {
  std::vector<CheckResult> checks;
  bool all_pass = true;
};

inline constexpr int kCriterionCount = 8;  // determinism is checked by running the suite twice

/// Checks for one criterion (1..8). Deterministic: every random draw comes
/// from a generator seeded per criterion.
std::vector<CheckResult> criterion_checks(int criterion, const SuiteOptions& options = {});

SuiteResult run_verify_suite(const SuiteOptions& options = {});

/// "PASS [c3] id  value=...  bound" with the note, if any, on a second line.
std::string check_line(const CheckResult& c);

Json suite_json(const SuiteResult& result, const SuiteOptions& options);

/// f = 1/2 |x|^2 + sum of all cubic and quartic monomials with coefficients
/// uniform in [-0.3, 0.3].
PotentialChart random_polynomial_chart(std::mt19937_64& rng, int dimension, const std::string& name);

/// Admissible samples in `box` with |det Hess f| > min_abs_det (and positive
/// definite Hessian when `riemannian`).
std::vector<Point> nondegenerate_samples(const PotentialChart& chart, const Box& box, int count,
                                         std::mt19937_64& rng, double min_abs_det = 1e-6,
                                         bool riemannian = false);

}  // namespace hessgeo
