// Copyright 2026 The rusarith Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"

namespace rusarith::cli {
namespace {

struct Result {
  int code;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("rusarith_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

TEST(Cli, NoSubcommandIsUsageError) {
  auto r = run({});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kUsage);
}

TEST(Cli, Help) {
  auto r = run({"--help"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("reproduce"), std::string::npos);
}

TEST(CliReproduce, Multerror) {
  auto r = run({"reproduce", "multerror"});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto j = r.doc();
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["total"], 15);
  EXPECT_EQ(j["matched"], 13);
  EXPECT_EQ(j["cells"].size(), 15u);
}

TEST(CliReproduce, ChebCsv) {
  auto r = run({"--format", "csv", "reproduce", "cheb"});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream s(r.out);
  std::string line;
  std::getline(s, line);
  EXPECT_EQ(line, "table,row,column,computed,printed,match,note");
  int rows = 0;
  while (std::getline(s, line)) ++rows;
  EXPECT_GE(rows, 3);
}

TEST(CliReproduce, ReciprocalsEuclidRow) {
  auto r = run({"reproduce", "reciprocals"});
  ASSERT_EQ(r.code, kOk) << r.err;
  bool found = false;
  auto doc = r.doc();
  for (const auto& c : doc["cells"])
    if (c["row"] == "euclid.tcount" && c["column"] == "n=2") {
      found = true;
      EXPECT_NEAR(c["computed"].get<double>() / 1.51e4, 1, 5e-3);
      EXPECT_TRUE(c["match"].get<bool>());
    }
  EXPECT_TRUE(found) << r.out.substr(0, 400);
}

TEST(CliReproduce, BadTable) { EXPECT_EQ(run({"reproduce", "nosuchtable"}).code, kUsage); }

TEST(CliSimulate, GbQuarterPi) {
  auto r = run({"--trials", "100000", "simulate", "gb", "--angles", "pi/4"});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto j = r.doc();
  EXPECT_NEAR(j["success_rate_first_attempt"].get<double>(), 0.5, 0.006);
  EXPECT_EQ(j["exhausted"], 0);
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
}

TEST(CliSimulate, M4MeanRotations) {
  auto r = run({"--trials", "20000", "simulate", "m4", "--angles", "0.1"});
  ASSERT_EQ(r.code, kOk) << r.err;
  double mean = r.doc()["rotations"]["mean"];
  EXPECT_GT(mean, 2 / 1.5);
  EXPECT_LT(mean, 2 * 1.5);
}

TEST(CliSimulate, ParOaaAlwaysSucceedsFirstTime) {
  auto r = run({"--trials", "2000", "simulate", "par_oaa", "--angles", "0.6"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.doc()["success_rate_first_attempt"].get<double>(), 1.0);
}

TEST(CliSimulate, ExpressionAndHistogramCsv) {
  auto r = run({"--trials", "3000", "--format", "csv", "simulate", "expr", "--expr", "PAR(GB(aff(0)), aff(1))",
                "--inputs", "0.4,0.7"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind("rotations,count,fraction\n", 0), 0u);
  std::istringstream s(r.out);
  std::string line;
  std::getline(s, line);
  long total = 0;
  while (std::getline(s, line)) total += std::stol(line.substr(line.find(',') + 1));
  EXPECT_EQ(total, 3000);
}

TEST(CliSimulate, NonRusGb) {
  auto r = run({"--trials", "20000", "simulate", "nonrus_gb", "--angles", "0.3"});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto j = r.doc();
  double sum = j["success_rate"].get<double>() + j["reverse_rate"].get<double>() + j["clifford_rate"].get<double>();
  EXPECT_NEAR(sum, 1, 1e-12);
  EXPECT_NEAR(j["success_rate"].get<double>(), j["analytic_success_prob"].get<double>(), 0.015);
}

TEST(CliSimulate, ExhaustionIsNumericFailure) {
  // An attempt cap of one fails about half of the pi/4 gearbox runs.
  auto r = run({"--trials", "1000", "simulate", "gb", "--angles", "pi/4", "--max-attempts", "1"});
  EXPECT_EQ(r.code, kNumeric);
  EXPECT_NE(r.err.find("exhaustion"), std::string::npos);
}

TEST(CliSimulate, UsageErrors) {
  EXPECT_EQ(run({"simulate", "gb"}).code, kUsage);
  EXPECT_EQ(run({"simulate", "toffoli", "--angles", "0.1"}).code, kUsage);
  EXPECT_EQ(run({"simulate", "gb", "--angles", "0.1,zz"}).code, kUsage);
  EXPECT_EQ(run({"--trials", "0", "simulate", "gb", "--angles", "0.1"}).code, kUsage);
  EXPECT_EQ(run({"--format", "xml", "simulate", "gb", "--angles", "0.1"}).code, kUsage);
}

TEST(CliSimulate, Deterministic) {
  std::vector<std::string> args{"--trials", "5000", "--seed", "17", "simulate", "m6", "--angles", "0.2,0.1"};
  auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, kOk);
  EXPECT_EQ(a.out, b.out);
  args[3] = "18";
  EXPECT_NE(run(args).out, a.out);
}

TEST(CliSqwave, ReciprocalExperiment) {
  auto r = run({"sqwave"});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto j = r.doc();
  EXPECT_LE(j["max_rel_error"].get<double>(), 0.026);
  EXPECT_LE(j["mean_rel_error"].get<double>(), 0.0046);
  EXPECT_EQ(j["fit"]["coefficients"].size(), 71u);
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
}

TEST(CliSqwave, BasisInputGivesUnitVector) {
  auto fit_path = temp_file("basis_fit.json");
  auto r = run({"sqwave", "--f", "basis:3", "--N", "10", "--fit-out", fit_path.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto j = json::parse(slurp(fit_path));
  auto c = j["coefficients"].get<std::vector<double>>();
  ASSERT_EQ(c.size(), 10u);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(c[i], i == 2 ? 1.0 : 0.0, 1e-8);
  std::filesystem::remove(fit_path);
}

TEST(CliSqwave, PolynomialCsvAndOutFile) {
  auto out = temp_file("poly.csv");
  auto r = run({"--format", "csv", "--out", out.string(), "sqwave", "--f", "poly:1,0,2", "--interval", "0,1", "--N",
                "16", "--points", "11"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::string text = slurp(out);
  EXPECT_EQ(text.rfind("x,value,exact,rel_error\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 12);
  std::filesystem::remove(out);
}

TEST(CliSqwave, MeshFunction) {
  auto mesh = temp_file("mesh.txt");
  {
    std::ofstream f(mesh);
    f << "# x,y\n";
    for (int i = 0; i <= 200; ++i) f << i / 200.0 << "," << 1 + (i / 200.0) * (i / 200.0) << "\n";
  }
  auto r = run({"sqwave", "--f", "mesh:" + mesh.string(), "--interval", "0,1", "--N", "20"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_LT(r.doc()["max_rel_error"].get<double>(), 0.03);
  std::filesystem::remove(mesh);
  EXPECT_EQ(run({"sqwave", "--f", "mesh:/nonexistent/file"}).code, kUsage);
}

TEST(CliSqwave, ExitCodes) {
  EXPECT_EQ(run({"sqwave", "--N", "0"}).code, kUsage);
  EXPECT_EQ(run({"sqwave", "--interval", "1,0"}).code, kUsage);
  EXPECT_EQ(run({"sqwave", "--f", "sinc"}).code, kUsage);
  // Without the gearbox recursion every basis function is affine.
  auto r = run({"sqwave", "--k", "0", "--N", "4"});
  EXPECT_EQ(r.code, kNumeric);
  EXPECT_NE(r.err.find("singular"), std::string::npos) << r.err;
}

TEST(CliCost, GbExample) {
  auto r = run({"cost", "gb", "--angles", "0.1"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NEAR(r.doc()["mean"].get<double>(), 2.0403, 1e-4);
}

TEST(CliCost, BaselineNewtonTableMode) {
  auto r = run({"--table-mode", "cost", "baseline", "--method", "newton", "--n", "16"});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto j = r.doc();
  EXPECT_NEAR(j["tcount"].get<double>() / 8.05e4, 1, 5e-3);
  EXPECT_EQ(j["mode"], "table");
}

TEST(CliCost, BaselineCsvRow) {
  auto r = run({"--format", "csv", "--table-mode", "cost", "baseline", "--method", "euclid", "--n", "16"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out, "method,n,tcount,qubits,mode\neuclid,16,9.68139e+05,85,table\n");
}

TEST(CliCost, Cache) {
  auto r = run({"cost", "cache", "--kappa", "8", "--eps", "0.5", "--delta", "0.25"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.doc()["qubits"], 6);
}

TEST(CliCost, ExpressionAndMultiplier) {
  auto r = run({"cost", "expr", "GB(const(pi/4), const(pi/4))", "--rotation-cost", "3"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NEAR(r.doc()["mean"].get<double>(), 16 / gb_success_prob({kPi / 4, kPi / 4}), 1e-9);
  auto m = run({"cost", "multiplier", "--which", "m4", "--n", "4"});
  ASSERT_EQ(m.code, kOk) << m.err;
  EXPECT_GT(m.doc()["tcount"].get<double>(), 0);
}

TEST(CliCost, ParseErrorReportsPosition) {
  auto r = run({"cost", "expr", "PAR(aff(0), FOO(1))", "--inputs", "0.1"});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("position 12"), std::string::npos) << r.err;
  EXPECT_EQ(run({"cost", "baseline", "--method", "karatsuba", "--n", "4"}).code, kUsage);
  EXPECT_EQ(run({"cost", "teleport"}).code, kUsage);
}

TEST(CliConfig, FileSuppliesDefaultsAndFlagsOverride) {
  auto cfg = temp_file("job.ini");
  {
    std::ofstream f(cfg);
    f << "seed=99\ntrials=3000\n";
  }
  auto from_file = run({"--config", cfg.string(), "simulate", "gb", "--angles", "0.4"});
  ASSERT_EQ(from_file.code, kOk) << from_file.err;
  EXPECT_EQ(from_file.doc()["seed"], 99);
  EXPECT_EQ(from_file.doc()["trials"], 3000);
  auto explicit_run = run({"--seed", "99", "--trials", "3000", "simulate", "gb", "--angles", "0.4"});
  EXPECT_EQ(from_file.out, explicit_run.out);
  auto overridden = run({"--config", cfg.string(), "--seed", "5", "simulate", "gb", "--angles", "0.4"});
  EXPECT_EQ(overridden.doc()["seed"], 5);
  EXPECT_EQ(overridden.doc()["trials"], 3000);
  std::filesystem::remove(cfg);
}

}  // namespace
}  // namespace rusarith::cli
