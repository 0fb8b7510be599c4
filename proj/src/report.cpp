#include "hessgeo/report.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "hessgeo/duality.hpp"
#include "hessgeo/errors.hpp"
#include "hessgeo/geometry.hpp"
#include "hessgeo/oracle.hpp"

namespace hessgeo {

Json verdict(const std::string& check, double residual, double tolerance) {
  Json v;
  v["check"] = check;
  v["residual"] = residual;
  v["tolerance"] = tolerance;
  v["pass"] = std::isfinite(residual) && residual <= tolerance;
  return v;
}

double relative(double difference, double scale) { return difference / std::max(1.0, std::fabs(scale)); }

Json chart_json(const PotentialChart& chart) {
  Json c;
  c["name"] = chart.name();
  c["variables"] = chart.variables();
  c["potential"] = to_string(chart.potential());
  Json dom = Json::array();
  for (const auto& d : chart.domain()) dom.push_back(to_string(d));
  c["domain"] = dom;
  return c;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

namespace {

Json nested(std::span<const double> data, int dim, int rank) {
  Json out = Json::array();
  if (rank == 1) {
    for (int i = 0; i < dim; ++i) out.push_back(data[static_cast<std::size_t>(i)]);
    return out;
  }
  const std::size_t stride = data.size() / static_cast<std::size_t>(dim);
  for (int i = 0; i < dim; ++i) out.push_back(nested(data.subspan(i * stride, stride), dim, rank - 1));
  return out;
}

Json signature_json(const Signature& s) {
  Json j;
  j["positive"] = s.positive;
  j["negative"] = s.negative;
  j["zero"] = s.zero;
  return j;
}

Json header(const char* command, const PotentialChart& chart, std::size_t samples) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["chart"] = chart_json(chart);
  j["samples"] = samples;
  return j;
}

Json degenerate_entry(std::size_t index, const Point& p, const std::string& reason) {
  Json d;
  d["index"] = index;
  d["point"] = to_json(p);
  d["reason"] = reason;
  return d;
}

bool record(Json& verdicts, Json v) {
  const bool pass = v["pass"].get<bool>();
  verdicts.push_back(std::move(v));
  return pass;
}

// Plane h-orthogonal to the sharp of kappa: the kernel of kappa as a covector.
std::optional<double> transverse_sectional(const Tensor& r, const Eigen::MatrixXd& h, const Eigen::VectorXd& kappa) {
  if (kappa.norm() < 1e-12) return std::nullopt;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(kappa.transpose());
  const Eigen::MatrixXd kernel = lu.kernel();
  if (kernel.cols() != 2) return std::nullopt;
  return sectional_curvature(r, h, kernel.col(0), kernel.col(1));
}

}  // namespace

Json to_json(const Tensor& t) { return nested(t.data(), t.dim(), t.rank()); }

Report analyze_samples(const PotentialChart& chart, std::span<const Point> samples) {
  const int n = chart.dimension();
  Report report;
  report.json = header("analyze", chart, samples.size());
  Json points = Json::array();
  Json degenerate = Json::array();
  double max_riemann = 0.0;

  for (std::size_t idx = 0; idx < samples.size(); ++idx) {
    const Point& p = samples[idx];
    const MetricValue h = hessian_metric(chart, p);
    if (!h.nondegenerate()) {
      degenerate.push_back(degenerate_entry(idx, p, "degenerate Hessian (|det| <= 1e-12)"));
      continue;
    }
    Json rec;
    rec["index"] = idx;
    rec["point"] = to_json(p);
    rec["metric"] = to_json(h.matrix);
    rec["signature"] = signature_json(h.signature);
    rec["determinant"] = h.determinant;
    rec["amari_chentsov"] = to_json(amari_chentsov(chart, p).lower);

    const RiemannValue r = riemann_closed_form(chart, p);
    const double r_max = r.components.max_abs();
    max_riemann = std::max(max_riemann, r_max);
    Json curv;
    curv["riemann_max_abs"] = r_max;
    curv["ricci"] = to_json(r.ricci);
    curv["scalar"] = r.scalar;
    Json planes = Json::array();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        Json plane;
        plane["i"] = i;
        plane["j"] = j;
        plane["value"] = sectional_curvature(r.components, h.matrix, Eigen::VectorXd::Unit(n, i),
                                             Eigen::VectorXd::Unit(n, j));
        planes.push_back(plane);
      }
    }
    curv["sectional_coordinate_planes"] = planes;
    if (n == 2) curv["gaussian"] = gaussian_curvature_2d(chart, p);

    const KoszulFormValue kz = koszul_form(chart, p);
    if (n == 3) {
      if (auto k = transverse_sectional(r.components, h.matrix, kz.covector)) curv["transverse_sectional"] = *k;
    }
    rec["curvature"] = curv;
    Json koszul;
    koszul["covector"] = to_json(kz.covector);
    koszul["log_abs_det"] = kz.log_abs_det;
    rec["koszul_form"] = koszul;

    // residuals backing the verdicts
    const RiemannValue oracle = riemann_from_christoffel(chart, p);
    const double scale = std::max(r_max, oracle.components.max_abs());
    Json verdicts = Json::array();
    bool ok = true;
    ok &= record(verdicts, verdict("riemann_symmetries", relative(riemann_symmetry_residuals(r.components).max(), r_max),
                                   tol::kRiemannSymmetry));
    ok &= record(verdicts, verdict("christoffel_oracle_agreement",
                                   relative(max_abs_difference(r.components, oracle.components), scale),
                                   tol::kOracleAgreement));
    const FiniteDifferenceAudit audit = finite_difference_audit(chart, p);
    double audit_scale = 0.0;
    for (int order = 2; order <= 4; ++order) audit_scale = std::max(audit_scale, derivative_tensor(chart, order, p).max_abs());
    ok &= record(verdicts, verdict("finite_difference_audit", relative(audit.max(), audit_scale), tol::kFiniteDifference));
    ok &= record(verdicts, verdict("koszul_closedness", relative(kz.closedness_residual, kz.covector.cwiseAbs().maxCoeff()),
                                   tol::kClosedness));
    ok &= record(verdicts, verdict("volume_identity",
                                   relative(volume_identity_residual(chart, p),
                                            kz.covector.cwiseAbs().maxCoeff() * std::exp(0.5 * kz.log_abs_det)),
                                   tol::kVolumeIdentity));
    if (h.riemannian()) {
      double violation = 0.0;
      for (int i = 0; i < n; ++i) {
        const RicciBound b = ricci_bound_check(chart, p, Eigen::VectorXd::Unit(n, i));
        violation = std::max({violation, b.lower - b.value, b.value - b.upper});
      }
      ok &= record(verdicts, verdict("ricci_bounds", std::max(0.0, violation), tol::kRicciSlack));
    }
    rec["verdicts"] = verdicts;
    report.all_pass &= ok;
    points.push_back(rec);
  }

  report.json["points"] = points;
  report.json["degenerate_points"] = degenerate;
  Json summary;
  summary["analyzed"] = points.size();
  summary["degenerate"] = degenerate.size();
  summary["max_abs_riemann"] = max_riemann;
  summary["flat"] = !points.empty() && max_riemann < tol::kFlatCurvature;
  summary["all_checks_pass"] = report.all_pass;
  report.json["summary"] = summary;
  return report;
}

Report flatness_report(const PotentialChart& chart, std::span<const Point> samples) {
  const int n = chart.dimension();
  Report report;
  report.json = header("flatness", chart, samples.size());
  Json per_point = Json::array();
  Json degenerate = Json::array();
  double worst = 0.0;
  for (std::size_t idx = 0; idx < samples.size(); ++idx) {
    const Point& p = samples[idx];
    const MetricValue h = hessian_metric(chart, p);
    if (!h.nondegenerate()) {
      degenerate.push_back(degenerate_entry(idx, p, "degenerate Hessian (|det| <= 1e-12)"));
      continue;
    }
    Json rec;
    rec["index"] = idx;
    rec["point"] = to_json(p);
    rec["signature"] = signature_json(h.signature);
    double value = 0.0;
    if (n == 2) {
      value = gaussian_curvature_2d(chart, p);
      rec["gaussian"] = value;
    } else {
      value = riemann_closed_form(chart, p).components.max_abs();
      rec["riemann_max_abs"] = value;
    }
    worst = std::max(worst, std::fabs(value));
    per_point.push_back(rec);
  }
  report.json["points"] = per_point;
  report.json["degenerate_points"] = degenerate;
  report.json["measure"] = n == 2 ? "max |gaussian curvature|" : "max |R_ijkl|";
  report.json["max_abs_curvature"] = worst;
  report.json["tolerance"] = tol::kFlatCurvature;
  report.json["flat"] = !per_point.empty() && worst < tol::kFlatCurvature;
  report.all_pass = !per_point.empty();
  return report;
}

Report legendre_report(const PotentialChart& chart, std::span<const Point> samples) {
  Report report;
  report.json = header("legendre", chart, samples.size());
  const auto position = chart.variable_expressions();
  Json per_point = Json::array();
  Json degenerate = Json::array();
  for (std::size_t idx = 0; idx < samples.size(); ++idx) {
    const Point& p = samples[idx];
    if (!hessian_metric(chart, p).nondegenerate()) {
      degenerate.push_back(degenerate_entry(idx, p, "degenerate Hessian (|det| <= 1e-12)"));
      continue;
    }
    const Point one[1] = {p};
    const ConjugateConnectionValue cc = conjugate_connection(chart, p);
    const EulerFieldValue euler = legendre_euler_field(chart, p);
    const RadiantDualValue radiant = radiant_to_koszul(chart, position, p);
    Json rec;
    rec["index"] = idx;
    rec["point"] = to_json(p);
    rec["conjugate_euler_field"] = to_json(euler.field);
    rec["koszul_potential"] = to_json(radiant.covector);
    Json verdicts = Json::array();
    bool ok = true;
    const double gscale = cc.gamma_star.max_abs();
    ok &= record(verdicts, verdict("dual_curvature", relative(dual_flatness_check(chart, one), gscale * gscale),
                                   tol::kDualDefect));
    ok &= record(verdicts, verdict("duality_product_rule", relative(cc.duality_residual, gscale), tol::kDualityIdentity));
    ok &= record(verdicts, verdict("levi_civita_average", relative(levi_civita_average_residual(chart, p), gscale),
                                   tol::kLeviCivitaAverage));
    ok &= record(verdicts, verdict("legendre_euler_defect", euler.defect_norm, tol::kDualDefect));
    ok &= record(verdicts, verdict("legendre_koszul_defect", relative(radiant.defect_norm, hessian_metric(chart, p).matrix.cwiseAbs().maxCoeff()),
                                   tol::kDualDefect));
    rec["verdicts"] = verdicts;
    report.all_pass &= ok;
    per_point.push_back(rec);
  }
  report.json["points"] = per_point;
  report.json["degenerate_points"] = degenerate;
  report.json["all_checks_pass"] = report.all_pass;
  return report;
}

Report warp_report(const WarpedSpec& spec, std::span<const Point> samples, double epsilon) {
  Report report;
  report.json = header("warp", spec.base, samples.size());
  report.json["warp"] = to_string(spec.warp);
  report.json["inverse"] = to_string(spec.inverse);
  report.json["epsilon"] = epsilon;
  Json per_point = Json::array();
  for (std::size_t idx = 0; idx < samples.size(); ++idx) {
    const Point& p = samples[idx];
    const WarpedMetricCheck m = warped_metric_check(spec, p);
    Json rec;
    rec["index"] = idx;
    rec["point"] = to_json(p);
    rec["pulled_back_metric"] = to_json(m.pulled_back);
    try {
      const WarpedPotentialValue v = warped_potential_value(spec, p, epsilon);
      Json integral;
      integral["status"] = v.status == IntegralStatus::kConvergent ? "convergent" : "divergent";
      integral["value"] = v.integral;
      integral["truncated_at_epsilon"] = v.truncated_integral;
      integral["halvings"] = v.halvings;
      if (v.status == IntegralStatus::kConvergent) rec["potential"] = v.value;
      rec["integral"] = integral;
    } catch (const Error& e) {
      Json integral;
      integral["status"] = "unavailable";
      integral["reason"] = e.what();
      rec["integral"] = integral;
    }
    Json verdicts = Json::array();
    report.all_pass &= record(verdicts, verdict("warped_metric_identity",
                                                relative(m.residual, m.expected.cwiseAbs().maxCoeff()),
                                                tol::kWarpedMetric));
    rec["verdicts"] = verdicts;
    per_point.push_back(rec);
  }
  report.json["points"] = per_point;
  report.json["all_checks_pass"] = report.all_pass;
  return report;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace hessgeo
