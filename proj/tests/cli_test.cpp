// Copyright 2026 The lopsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lopsim/gates.hpp"
#include "lopsim/serialize.hpp"
#include "reference_data.hpp"

namespace lopsim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int exit_code;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  const fs::path dir = fs::temp_directory_path() / "lopsim_cli_test";
  fs::create_directories(dir);
  static int counter = 0;
  const fs::path out = dir / ("stdout_" + std::to_string(counter++) + ".txt");
  const std::string cmd =
      std::string(LOPSIM_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  return {WEXITSTATUS(raw), ss.str()};
}

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lopsim_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(CliVerifyTest, CzPasses) {
  const fs::path out = temp_file("verify_cz.json");
  const RunResult r = run_cli("verify --gate cz --deterministic --out " +
                              out.string());
  EXPECT_EQ(r.exit_code, 0) << r.stdout_text;
  const json rep = json::parse(std::ifstream(out));
  EXPECT_TRUE(rep.at("passed").get<bool>());
  EXPECT_NEAR(rep.at("p_succ").get<double>(), 0.15241, 1e-3);
  EXPECT_GE(rep.at("min_fidelity").get<double>(), 1.0 - 1e-9);
  EXPECT_EQ(rep.at("trials").get<int>(), 100);
  EXPECT_FALSE(rep.contains("timestamp"));
  EXPECT_EQ(rep.at("config").at("command").get<std::string>(), "verify");
}

TEST(CliVerifyTest, ToffoliReckPasses) {
  const fs::path out = temp_file("verify_toffoli.json");
  const RunResult r = run_cli(
      "verify --gate toffoli --scheme reck --deterministic --out " +
      out.string());
  EXPECT_EQ(r.exit_code, 0) << r.stdout_text;
  const json rep = json::parse(std::ifstream(out));
  EXPECT_NEAR(rep.at("p_succ").get<double>(), 0.02665, 1e-3);
  for (const auto& row : rep.at("truth_table"))
    EXPECT_TRUE(row.at("ok").get<bool>());
}

TEST(CliVerifyTest, FailedCheckGivesExitTwo) {
  // an impossibly tight tolerance against the tabulated value must trip
  // the success-probability check
  const fs::path out = temp_file("verify_fail.json");
  const RunResult r = run_cli(
      "verify --gate cz --tol 1e-12 --deterministic --out " + out.string());
  EXPECT_EQ(r.exit_code, 2);
  const json rep = json::parse(std::ifstream(out));
  EXPECT_FALSE(rep.at("passed").get<bool>());
  EXPECT_FALSE(rep.at("checks").at("success_probability").get<bool>());
  EXPECT_TRUE(rep.at("checks").at("fidelity").get<bool>());
}

TEST(CliVerifyTest, ZeroTrialsIsUsageError) {
  const RunResult r = run_cli("verify --gate cz --trials 0");
  EXPECT_EQ(r.exit_code, 1);
}

TEST(CliVerifyTest, UnknownGateIsUsageError) {
  const RunResult r = run_cli("verify --gate hadamard");
  EXPECT_EQ(r.exit_code, 1);
}

TEST(CliVerifyTest, DeterministicReportsAreByteIdentical) {
  // same seed and same flags (including --out) twice
  const fs::path a = temp_file("verify_repeat.json");
  EXPECT_EQ(run_cli("verify --gate cnot --deterministic --out " + a.string())
                .exit_code,
            0);
  std::stringstream sa;
  sa << std::ifstream(a).rdbuf();
  EXPECT_EQ(run_cli("verify --gate cnot --deterministic --out " + a.string())
                .exit_code,
            0);
  std::stringstream sb;
  sb << std::ifstream(a).rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(CliSolveTest, ReportIndependentOfThreadCount) {
  const fs::path a = temp_file("solve_t1.json");
  const fs::path b = temp_file("solve_t2.json");
  EXPECT_EQ(run_cli("solve --problem cz --starts 30 --deterministic --out " +
                    a.string() + " --seed 9")
                .exit_code,
            0);
  // same flags, different worker budget: merged results must be identical
  ::setenv("LOPSIM_THREADS", "1", 1);
  const int code = run_cli("solve --problem cz --starts 30 --deterministic "
                           "--out " + b.string() + " --seed 9")
                       .exit_code;
  ::unsetenv("LOPSIM_THREADS");
  EXPECT_EQ(code, 0);
  std::stringstream sa, sb;
  sa << std::ifstream(a).rdbuf();
  sb << std::ifstream(b).rdbuf();
  // only the embedded out path may differ
  std::string ta = sa.str(), tb = sb.str();
  const auto scrub = [](std::string& s, const std::string& path) {
    const auto pos = s.find(path);
    ASSERT_NE(pos, std::string::npos);
    s.erase(pos, path.size());
  };
  scrub(ta, a.string());
  scrub(tb, b.string());
  EXPECT_EQ(ta, tb);
}

TEST(CliSolveTest, CzFindsTabulatedSolution) {
  const fs::path out = temp_file("solve_cz.json");
  const RunResult r = run_cli(
      "solve --problem cz --starts 60 --seed 42 --deterministic --out " +
      out.string());
  EXPECT_EQ(r.exit_code, 0) << r.stdout_text;
  const json rep = json::parse(std::ifstream(out));
  ASSERT_FALSE(rep.at("solutions").empty());
  const auto& top = rep.at("solutions").at(0);
  EXPECT_LT(top.at("residual_norm").get<double>(), 1e-10);
  EXPECT_NEAR(top.at("amplitude").get<double>(), 0.3904, 1e-4);
}

TEST(CliSolveTest, TowerRowFour) {
  const fs::path out = temp_file("solve_tower.json");
  const RunResult r = run_cli(
      "solve --problem tower --k 4 --starts 120 --seed 42 --deterministic "
      "--out " + out.string());
  EXPECT_EQ(r.exit_code, 0) << r.stdout_text;
  const json rep = json::parse(std::ifstream(out));
  bool found = false;
  for (const auto& s : rep.at("solutions"))
    if (std::abs(s.at("amplitude").get<double>() - 0.2664) < 1e-3)
      found = true;
  EXPECT_TRUE(found);
}

TEST(CliSolveTest, CczSeedFileConverges) {
  const fs::path seeds = temp_file("eq_seeds.json");
  {
    std::ofstream f(seeds);
    f << json::array({{-0.7893, -0.9428, -0.3809, -0.3284, -0.2583, 0.8719,
                       0.03792, 0.3689, 0.7943, 0.8559}});
  }
  const fs::path out = temp_file("solve_ccz.json");
  const RunResult r = run_cli(
      "solve --problem ccz --scheme clements --starts 0 --seed-file " +
      seeds.string() + " --deterministic --out " + out.string());
  EXPECT_EQ(r.exit_code, 0) << r.stdout_text;
  const json rep = json::parse(std::ifstream(out));
  ASSERT_FALSE(rep.at("solutions").empty());
  EXPECT_LT(rep.at("solutions").at(0).at("residual_norm").get<double>(),
            1e-10);
}

TEST(CliSolveTest, NoSolutionExitCode) {
  const RunResult r =
      run_cli("solve --problem ccz --starts 1 --seed 3 --tol 1e-16");
  EXPECT_EQ(r.exit_code, 3);
}

TEST(CliSimulateTest, IdentityNetwork) {
  const fs::path net = temp_file("identity2.json");
  {
    std::ofstream f(net);
    f << to_json(NetworkSpec(2)).dump();
  }
  const fs::path out = temp_file("sim_identity.csv");
  const RunResult r = run_cli("simulate --network " + net.string() +
                              " --input-occupations 1,0 --out " + out.string());
  EXPECT_EQ(r.exit_code, 0) << r.stdout_text;
  std::stringstream ss;
  ss << std::ifstream(out).rdbuf();
  EXPECT_NE(ss.str().find("1 0,1,0,1"), std::string::npos) << ss.str();
}

TEST(CliSimulateTest, BalancedSplitterCoincidence) {
  const fs::path net = temp_file("bs.json");
  {
    NetworkSpec spec(2);
    spec.add(1, BeamSplitterSetting{1.0 / std::numbers::sqrt2,
                                    1.0 / std::numbers::sqrt2});
    std::ofstream f(net);
    f << to_json(spec).dump();
  }
  const RunResult r =
      run_cli("simulate --network " + net.string() + " --input-occupations 1,1");
  EXPECT_EQ(r.exit_code, 0);
  // the (1,1) coincidence row carries probability 0
  std::istringstream lines(r.stdout_text);
  std::string line;
  bool seen = false;
  while (std::getline(lines, line)) {
    if (line.rfind("1 1,", 0) == 0) {
      seen = true;
      EXPECT_NE(line.find(",0"), std::string::npos);
      const double prob = std::stod(line.substr(line.rfind(',') + 1));
      EXPECT_LT(prob, 1e-24);
    }
  }
  EXPECT_TRUE(seen) << r.stdout_text;
}

TEST(CliSimulateTest, EncodedRegisterPostselected) {
  const fs::path net = temp_file("cz.json");
  {
    std::ofstream f(net);
    f << to_json(cz_network()).dump();
  }
  const RunResult r = run_cli("simulate --network " + net.string() +
                              " --input-bits 11 --postselect");
  EXPECT_EQ(r.exit_code, 0) << r.stdout_text;
  std::istringstream lines(r.stdout_text);
  std::string line;
  bool seen = false;
  while (std::getline(lines, line)) {
    if (line.rfind("11,", 0) == 0) {
      seen = true;
      const std::string re = line.substr(3, line.find(',', 3) - 3);
      EXPECT_NEAR(std::stod(re), -0.3904, 1e-3);
    }
  }
  EXPECT_TRUE(seen) << r.stdout_text;
}

TEST(CliCascadeTest, CzDefaultPasses) {
  const fs::path out = temp_file("cascade_cz.json");
  const RunResult r =
      run_cli("cascade --gate cz --deterministic --out " + out.string());
  EXPECT_EQ(r.exit_code, 0) << r.stdout_text;
  const json rep = json::parse(std::ifstream(out));
  EXPECT_TRUE(rep.at("passed").get<bool>());
  EXPECT_EQ(rep.at("rows").size(), 8u);
  EXPECT_TRUE(rep.at("signs_match").get<bool>());
}

TEST(CliCascadeTest, RefusesSharedPair) {
  const RunResult r = run_cli("cascade --gate cz --qubits '0,1;0,1'");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.stdout_text.find("sharing"), std::string::npos);
}

TEST(CliCascadeTest, RefusesTripletsSharingTwoQubits) {
  const RunResult r = run_cli("cascade --gate ccz --qubits '0,1,2;1,2,3'");
  EXPECT_EQ(r.exit_code, 1);
}

TEST(CliCascadeTest, MissingGateIsUsageError) {
  const RunResult r = run_cli("cascade");
  EXPECT_EQ(r.exit_code, 1);
}

TEST(CliExportTest, CzMatrixCsv) {
  const fs::path out = temp_file("cz_matrix.csv");
  const RunResult r = run_cli("export --gate cz --format matrix_csv --out " +
                              out.string());
  EXPECT_EQ(r.exit_code, 0) << r.stdout_text;
  std::ifstream f(out);
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  ASSERT_EQ(rows.size(), 5u);
  const ComplexMatrix ref = testdata::cz_reference_matrix();
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      EXPECT_NEAR(rows[i][j], ref(i, j).real(), 1e-3);
}

TEST(CliExportTest, CczJsonSettings) {
  const fs::path out = temp_file("ccz.json");
  const RunResult r = run_cli(
      "export --gate ccz --scheme clements --format json --out " +
      out.string());
  EXPECT_EQ(r.exit_code, 0);
  const NetworkSpec spec = network_from_json(json::parse(std::ifstream(out)));
  EXPECT_EQ(spec.modes, 8);
  int mzis = 0, swaps = 0;
  for (const auto& e : spec.elements) {
    if (std::holds_alternative<MziSetting>(e.setting)) ++mzis;
    if (std::holds_alternative<SwapSetting>(e.setting)) ++swaps;
  }
  EXPECT_EQ(mzis, 10);
  EXPECT_EQ(swaps, 6);
  // first core parameter within a rounding step of the tabulated -0.7893
  for (const auto& e : spec.elements)
    if (std::holds_alternative<MziSetting>(e.setting)) {
      EXPECT_NEAR(std::get<MziSetting>(e.setting).t, -0.7893, 1e-3);
      break;
    }
}

TEST(CliExportTest, SchemesExportTheSameMatrix) {
  const fs::path a = temp_file("ccz_c.csv");
  const fs::path b = temp_file("ccz_r.csv");
  EXPECT_EQ(run_cli("export --gate ccz --scheme clements --format matrix_csv "
                    "--out " + a.string()).exit_code,
            0);
  EXPECT_EQ(run_cli("export --gate ccz --scheme reck --format matrix_csv "
                    "--out " + b.string()).exit_code,
            0);
  std::ifstream fa(a), fb(b);
  std::string la, lb;
  while (std::getline(fa, la) && std::getline(fb, lb)) {
    std::stringstream sa(la), sb(lb);
    std::string ca, cb;
    while (std::getline(sa, ca, ',') && std::getline(sb, cb, ','))
      EXPECT_NEAR(std::stod(ca), std::stod(cb), 1e-10);
  }
}

TEST(CliCalibrateTest, BalancedTarget) {
  const fs::path out = temp_file("cal.json");
  const RunResult r = run_cli(
      "calibrate --target-t 0.70710678118654752 --theta2-0 0.25 --arm upper "
      "--deterministic --out " + out.string());
  EXPECT_EQ(r.exit_code, 0) << r.stdout_text;
  const json rep = json::parse(std::ifstream(out));
  EXPECT_NEAR(rep.at("driven_phase").get<double>(),
              0.25 + std::numbers::pi / 2, 1e-9);
  EXPECT_NEAR(rep.at("realized_t").get<double>(), 0.7071067811865475, 1e-9);
}

TEST(CliCalibrateTest, OutOfRangeTarget) {
  const RunResult r = run_cli("calibrate --target-t 1.5");
  EXPECT_EQ(r.exit_code, 1);
}

}  // namespace
}  // namespace lopsim
