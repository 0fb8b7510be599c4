#pragma once

#include <json.hpp>

#include <span>
#include <string>

#include "hessgeo/chart.hpp"
#include "hessgeo/constructions.hpp"

namespace hessgeo {

inline constexpr const char* kToolName = "hessgeo";
inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

// Every verdict in a report is {"check", "residual", "tolerance", "pass"} with
// pass == (residual <= tolerance). Residuals comparing two tensors are divided
// by max(1, largest magnitude involved), so the tolerances in conventions.hpp
// read as relative for large components and absolute for small ones.

Json verdict(const std::string& check, double residual, double tolerance);

/// max |x| / max(1, scale)
double relative(double difference, double scale);

Json chart_json(const PotentialChart& chart);
Json to_json(const Eigen::MatrixXd& m);
Json to_json(const Eigen::VectorXd& v);
Json to_json(const Tensor& t);  // nested arrays

struct Report {
  Json json;
  bool all_pass = true;  // every verdict passed
};

/// Metric, Amari-Chentsov tensor, curvature (closed form, checked against the
/// Christoffel oracle and a finite-difference audit), Koszul form and Ricci
/// bounds at each sample. Degenerate samples are listed, not fatal.
Report analyze_samples(const PotentialChart& chart, std::span<const Point> samples);

/// Flat iff every nondegenerate sample has max |R_ijkl| (Gaussian curvature
/// for n = 2) below tol::kFlatCurvature. all_pass is true when the verdict
/// could be computed; the verdict itself is in json["flat"].
Report flatness_report(const PotentialChart& chart, std::span<const Point> samples);

/// Duality identities and both Legendre defects at each sample.
Report legendre_report(const PotentialChart& chart, std::span<const Point> samples);

/// Metric identity at each (x, t) and the integral status at epsilon.
Report warp_report(const WarpedSpec& spec, std::span<const Point> samples, double epsilon);

/// Pretty-printed with two-space indent and a trailing newline.
std::string dump(const Json& j);

}  // namespace hessgeo
