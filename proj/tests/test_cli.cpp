#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "hessgeo/cli.hpp"

namespace hessgeo {
namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "hessgeo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& file) { return std::string(HESSGEO_DATA_DIR) + "/" + file; }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hessgeo_test_" + name);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"analyze"}).code, kExitUsage);
  EXPECT_EQ(run({"analyze", "/nonexistent.pot"}).code, kExitUsage);
  EXPECT_EQ(run({"verify-paper", "--criterion", "9"}).code, kExitUsage);
  EXPECT_EQ(run({"verify-paper", "--tolerance-scale", "-1"}).code, kExitUsage);
  EXPECT_EQ(run({"cheng-yau", "--cone", "cube"}).code, kExitUsage);
  EXPECT_EQ(run({"cheng-yau", "--cone", "orthant", "--resolution", "8"}).code, kExitUsage);
  EXPECT_EQ(run({"cheng-yau", "--cone", "orthant", "--window", "0,1,1,2"}).code, kExitUsage);
  EXPECT_EQ(run({"flatness", data("polar_flat.pot"), "--expect", "maybe"}).code, kExitUsage);
}

TEST(Cli, Version) {
  const CliRun r = run({"--version"});
  EXPECT_EQ(r.code, kExitSuccess);
  EXPECT_NE(r.out.find("hessgeo 0.1.0"), std::string::npos) << r.out;
}

TEST(Cli, AnalyzeWritesDeterministicJson) {
  const CliRun a = run({"analyze", data("hyperbolic2.pot"), "--json", "-"});
  const CliRun b = run({"analyze", data("hyperbolic2.pot"), "--json", "-"});
  ASSERT_EQ(a.code, kExitSuccess) << a.err;
  const auto start = a.out.find('{');
  ASSERT_NE(start, std::string::npos);
  const auto json = nlohmann::json::parse(a.out.substr(start));
  EXPECT_EQ(json["points"].size(), 20u);
  EXPECT_NEAR(json["points"][0]["curvature"]["gaussian"].get<double>(), -1.0, 1e-10);
  EXPECT_EQ(a.out.substr(start), b.out.substr(b.out.find('{')));
}

TEST(Cli, AnalyzeSampleOverrides) {
  const CliRun r = run({"analyze", data("lorentz_cone_3d.pot"), "--samples", "3", "--seed", "5"});
  EXPECT_EQ(r.code, kExitSuccess) << r.out << r.err;
  EXPECT_NE(r.out.find("3 samples"), std::string::npos);
}

TEST(Cli, MalformedFileReportsPosition) {
  const auto path = temp_path("bad.pot");
  std::ofstream(path) << "name: bad\nvariables: x, y\npotential: x + * y\nbox: 0 1, 0 1\n";
  const CliRun r = run({"analyze", path.string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find(path.string() + ":3:16"), std::string::npos) << r.err;
  std::filesystem::remove(path);
}

TEST(Cli, FlatnessExpectations) {
  EXPECT_EQ(run({"flatness", data("polar_flat.pot"), "--expect", "flat"}).code, kExitSuccess);
  EXPECT_EQ(run({"flatness", data("polar_flat.pot"), "--expect", "curved"}).code, kExitCheckFailure);
  EXPECT_EQ(run({"flatness", data("hyperbolic2.pot"), "--expect", "curved"}).code, kExitSuccess);
  EXPECT_EQ(run({"flatness", data("harmonic.pot"), "--expect", "flat"}).code, kExitSuccess);
}

TEST(Cli, LegendreAndWarp) {
  EXPECT_EQ(run({"legendre", data("lorentz_cone_3d.pot")}).code, kExitSuccess);
  EXPECT_EQ(run({"legendre", data("orthant.pot")}).code, kExitSuccess);
  const CliRun w = run({"warp", "--base", data("line.pot"), "--warp-expr", "log(t)", "--inverse-expr", "exp(t)"});
  EXPECT_EQ(w.code, kExitSuccess) << w.out << w.err;
  EXPECT_NE(w.out.find("convergent"), std::string::npos);
  const CliRun d = run({"warp", "--base", data("line.pot"), "--warp-expr", "t", "--inverse-expr", "t"});
  EXPECT_EQ(d.code, kExitSuccess) << d.out << d.err;
  EXPECT_NE(d.out.find("divergent"), std::string::npos);
  // F is not the inverse of f: numerical failure
  const CliRun bad = run({"warp", "--base", data("line.pot"), "--warp-expr", "log(t)", "--inverse-expr", "2*exp(t)"});
  EXPECT_EQ(bad.code, kExitNumerical) << bad.out << bad.err;
  EXPECT_EQ(run({"warp", "--base", data("line.pot"), "--warp-expr", "log(", "--inverse-expr", "exp(t)"}).code,
            kExitUsage);
}

TEST(Cli, ChengYauWritesCsv) {
  const auto path = temp_path("grid.csv");
  const CliRun r = run({"cheng-yau", "--cone", "lorentz", "--resolution", "9", "--csv", path.string()});
  ASSERT_EQ(r.code, kExitSuccess) << r.out << r.err;
  EXPECT_NE(r.out.find("converged: true"), std::string::npos);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "x,t,u,residual");
  std::filesystem::remove(path);
}

TEST(Cli, VerifyOneCriterion) {
  const CliRun ok = run({"verify-paper", "--criterion", "1"});
  EXPECT_EQ(ok.code, kExitSuccess) << ok.out;
  EXPECT_NE(ok.out.find("PASS criterion 1"), std::string::npos);
  // the finite-difference audits cannot meet 1e-20
  const CliRun tight = run({"verify-paper", "--criterion", "3", "--tolerance-scale", "1e-14"});
  EXPECT_EQ(tight.code, kExitCheckFailure);
  EXPECT_NE(tight.out.find("FAIL [c3] oracle.fd_audit"), std::string::npos) << tight.out;
}

}  // namespace
}  // namespace hessgeo
