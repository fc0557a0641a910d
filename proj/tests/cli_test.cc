#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "btrank/report.h"

namespace btrank {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult RunCli(const std::string& args) {
  const std::string command = std::string(BTRANK_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return {};
  RunResult result;
  char buffer[4096];
  size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.output.append(buffer, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string DataFile(const std::string& name) {
  return std::string(BTRANK_DATA_DIR) + "/" + name;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("btrank_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& contents) {
    const fs::path path = dir_ / name;
    std::ofstream(path) << contents;
    return path.string();
  }

  fs::path dir_;
};

TEST_F(CliTest, FitPrintsTable) {
  const RunResult r = RunCli("fit --data " + DataFile("example1.json") + " --epsilon 0.5");
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("0.600"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("0.333"), std::string::npos);
}

TEST_F(CliTest, FitJsonToFile) {
  const std::string out = (dir_ / "fit.json").string();
  const RunResult r = RunCli("fit --data " + DataFile("example1.json") +
                          " --epsilon 0.1 --normalization simplex --out " + out);
  ASSERT_EQ(r.exit_code, 0) << r.output;
  std::ifstream file(out);
  const Json json = Json::parse(file);
  double sum = 0.0;
  for (const auto& u : json["merits"]) sum += u.get<double>();
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_EQ(json["normalization"]["kind"], "simplex");
}

TEST_F(CliTest, AutoEpsilonOnThirtyTwoTeams) {
  std::string csv = "home,away,outcome\n";
  for (int i = 0; i < 32; ++i) {
    csv += "T" + std::to_string(i) + ",T" + std::to_string((i + 1) % 32) + ",home_win\n";
  }
  const std::string path = Write("cycle.csv", csv);
  const RunResult r = RunCli("fit --data " + path + " --epsilon auto --out json");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const Json json = Json::parse(r.output);
  EXPECT_NEAR(json["epsilon"].get<double>(), std::sqrt(std::log(32.0) / 32.0), 1e-15);
}

TEST_F(CliTest, CheckFailsWithWitness) {
  const RunResult r = RunCli("check --data " + DataFile("example1.json"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("fail (witness {1, 2} | {3, 4})"), std::string::npos) << r.output;
  EXPECT_EQ(RunCli("check --data " + DataFile("example1.json") + " --require B").exit_code, 0);
  EXPECT_EQ(RunCli("check --data " + DataFile("home_and_home.csv")).exit_code, 0);
}

TEST_F(CliTest, ParseErrorNamesLine) {
  const RunResult r = RunCli("check --data " + DataFile("malformed.csv"));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("line 3"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("malformed.csv"), std::string::npos);
}

TEST_F(CliTest, ExistenceFailureExitCode) {
  const std::string path =
      Write("split.json", R"({"teams": ["a", "b", "c"], "a": [[0,1,0],[1,0,0],[0,0,0]]})");
  const RunResult r = RunCli("fit --data " + path + " --epsilon 0.1");
  EXPECT_EQ(r.exit_code, 1) << r.output;
  EXPECT_NE(r.output.find("{c}"), std::string::npos) << r.output;
}

TEST_F(CliTest, TieModelsNeedTies) {
  const RunResult r =
      RunCli("fit --data " + DataFile("example1.json") + " --model rao-kupper --epsilon 0.1");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("at least one tie"), std::string::npos) << r.output;
}

TEST_F(CliTest, NonConvergenceExitCode) {
  const RunResult r =
      RunCli("fit --data " + DataFile("example2.json") + " --epsilon 0.1 --max-iters 1");
  EXPECT_EQ(r.exit_code, 3) << r.output;
}

TEST_F(CliTest, ConfigErrors) {
  EXPECT_EQ(RunCli("fit --data " + DataFile("example1.json") + " --epsilon -1").exit_code, 4);
  EXPECT_EQ(RunCli("fit --data " + DataFile("example1.json") + " --epsilon x").exit_code, 4);
  EXPECT_EQ(RunCli("fit --data " + DataFile("example1.json") + " --model elo").exit_code, 4);
  EXPECT_EQ(RunCli("fit").exit_code, 4);
  EXPECT_EQ(RunCli("--help").exit_code, 0);
}

TEST_F(CliTest, SweepReportsStability) {
  const RunResult r = RunCli("sweep --data " + DataFile("example1.json") +
                          " --epsilons 0.001,0.01,0.1,0.5,1,2 --ratios --jobs 2");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("stable: yes"), std::string::npos) << r.output;
  const RunResult cg = RunCli("sweep --data " + DataFile("example1.json") +
                           " --epsilons 0.1,0.5 --perturbation conner-grant --ratios");
  ASSERT_EQ(cg.exit_code, 0) << cg.output;
  EXPECT_NE(cg.output.find("stable: no"), std::string::npos) << cg.output;
}

TEST_F(CliTest, MapDefaultRate) {
  const RunResult r =
      RunCli("map --data " + DataFile("example1.json") + " --shape 2 --out json");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const Json json = Json::parse(r.output);
  EXPECT_EQ(json["prior"]["rate"], 7.0);
  EXPECT_NEAR(json["merits"][3].get<double>(), 0.230, 1e-3);
}

TEST_F(CliTest, SeedsByKey) {
  const std::string league = Write("league.json", R"({"conferences": [{"name": "All",
      "divisions": [{"name": "Only", "teams": ["Lions", "Bears"]}]}]})");
  const RunResult r = RunCli("seeds --data " + DataFile("home_and_home.csv") +
                          " --divisions " + league +
                          " --key pct --seeds 2 --division-winners 1 --out json");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const Json json = Json::parse(r.output);
  EXPECT_EQ(json["seeds"][0]["seeds"][0]["team"], "Bears");
  EXPECT_EQ(json["seeds"][0]["seeds"][0]["key"], 0.5);
}

TEST_F(CliTest, SimulateSmallGrid) {
  const RunResult r = RunCli("simulate --t-grid 20,50 --replicas 2 --seed 3 --out json");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const Json json = Json::parse(r.output);
  ASSERT_EQ(json["results"].size(), 2u);
  EXPECT_EQ(json["results"][1]["t"], 50);
  EXPECT_EQ(json["results"][0]["errors"].size(), 2u);
}

TEST_F(CliTest, SeedFromEnvironment) {
  const std::string args = "fit --data " + DataFile("example1.json") +
                           " --epsilon 0.1 --restarts 2 --out json";
  const RunResult a = RunCli(args);
  const RunResult b = RunCli(args);
  EXPECT_EQ(a.output, b.output);
  const RunResult bad = RunCli("fit --data x");
  EXPECT_NE(bad.exit_code, 0);
  const std::string env_bad = "BTRANK_SEED=abc " + std::string(BTRANK_CLI_PATH) +
                              " fit --data " + DataFile("example1.json") + " >/dev/null 2>&1";
  const int status = std::system(env_bad.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 4);
}

}  // namespace
}  // namespace btrank
