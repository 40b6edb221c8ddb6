// Copyright 2026 The pisim Authors
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

// Drives the pisim executable end to end and checks exit statuses and files.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pisim_cli_" + std::string(::testing::UnitTest::GetInstance()
                                           ->current_test_info()
                                           ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  std::string Read(const std::string& name) {
    std::ifstream in(dir_ / name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  int Run(const std::string& args) {
    const std::string cmd = std::string(PISIM_BINARY) + " " + args + " >" +
                            (dir_ / "stdout.txt").string() + " 2>" +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

constexpr char kRun[] = "command = run\nscheme.n = 3\nscheme.m = 1\n";

TEST_F(CliTest, RunWritesCsvToStdout) {
  const std::string scenario = Write("a.scenario", kRun);
  EXPECT_EQ(Run("run --scenario " + scenario), 0);
  EXPECT_EQ(Read("stdout.txt"), "P_00,P_01,P_10,P_11,P_loss\n0,0.5,0.5,0,0\n");
}

TEST_F(CliTest, OutOptionWritesFile) {
  const std::string scenario = Write("a.scenario", kRun);
  EXPECT_EQ(Run("run --scenario " + scenario + " --out " + (dir_ / "o.csv").string()), 0);
  EXPECT_EQ(Read("o.csv"), "P_00,P_01,P_10,P_11,P_loss\n0,0.5,0.5,0,0\n");
  EXPECT_EQ(Read("stdout.txt"), "");
}

TEST_F(CliTest, SweepIsByteIdenticalAcrossRuns) {
  const std::string scenario = std::string(PISIM_TEST_DATA_DIR) + "/case1_sweep.scenario";
  ASSERT_EQ(Run("sweep --scenario " + scenario + " --out " + (dir_ / "a.csv").string()), 0);
  ASSERT_EQ(Run("sweep --scenario " + scenario + " --out " + (dir_ / "b.csv").string()), 0);
  const std::string a = Read("a.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, Read("b.csv"));
  EXPECT_TRUE(a.starts_with("phase,P_00,P_01,P_10,P_11,P_loss\n"));
}

TEST_F(CliTest, OracleCheckSeedOption) {
  const std::string scenario =
      Write("o.scenario", "command = oracle-check\noracle.n_max = 2\noracle.cases = 5\n");
  EXPECT_EQ(Run("oracle-check --scenario " + scenario + " --seed 42"), 0);
  EXPECT_TRUE(Read("stdout.txt").starts_with("# seed=42\n"));
}

TEST_F(CliTest, InvalidScenarioExitsOne) {
  const std::string scenario = Write("bad.scenario", std::string(kRun) +
                                                         "scheme.transmission.3 = 1.2\n");
  EXPECT_EQ(Run("run --scenario " + scenario), 1);
  const std::string err = Read("stderr.txt");
  EXPECT_NE(err.find("scheme.transmission.3"), std::string::npos) << err;
  EXPECT_NE(err.find("line 4"), std::string::npos) << err;
}

TEST_F(CliTest, CommandMismatchAndUsageErrorsExitOne) {
  const std::string scenario = Write("a.scenario", kRun);
  EXPECT_EQ(Run("sweep --scenario " + scenario), 1);
  EXPECT_EQ(Run("run"), 1);
  EXPECT_EQ(Run("explode --scenario " + scenario), 1);
}

TEST_F(CliTest, FailedNumericalCheckExitsTwo) {
  const std::string scenario =
      Write("o.scenario", "command = oracle-check\noracle.tolerance = 0\noracle.n_max = 3\n");
  EXPECT_EQ(Run("oracle-check --scenario " + scenario), 2);
  EXPECT_NE(Read("stdout.txt").find(",fail"), std::string::npos);
  EXPECT_NE(Read("stderr.txt").find("tolerance"), std::string::npos);
}

TEST_F(CliTest, IoFailuresExitThree) {
  EXPECT_EQ(Run("run --scenario " + (dir_ / "missing.scenario").string()), 3);
  const std::string scenario = Write("a.scenario", kRun);
  EXPECT_EQ(Run("run --scenario " + scenario + " --out /nonexistent-dir/x/out.csv"), 3);
}

}  // namespace
