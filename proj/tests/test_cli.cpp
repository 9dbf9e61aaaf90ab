#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "subprocess.hpp"

namespace fs = std::filesystem;
using retention::testing::run_command;

namespace {

const std::string kCli = RETENTION_CLI_PATH;
const std::string kData = RETENTION_DATA_DIR;

double grab(const std::string& output, const std::string& key) {
  const auto pos = output.find(key + "=");
  if (pos == std::string::npos) throw std::runtime_error("missing '" + key + "' in: " + output);
  return std::stod(output.substr(pos + key.size() + 1));
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("retention_cli_test_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path file(const std::string& name, const std::string& content) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << content;
    return p;
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

TEST(CliSolve, SingleDipoleZeroField) {
  const auto res = run_command(kCli + " solve " + kData + "/topologies/single.topo --h-override 0");
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_NE(res.output.find("events=2"), std::string::npos);
  EXPECT_DOUBLE_EQ(grab(res.output, "events"), 2.0);
  EXPECT_DOUBLE_EQ(grab(res.output, "events_per_dipole"), 2.0);
  EXPECT_DOUBLE_EQ(grab(res.output, "time_lambda0"), 2.0);
}

TEST(CliSolve, TriangleAtUnitCoupling) {
  const auto res = run_command(kCli + " solve " + kData + "/topologies/triangle.topo --h-override 0");
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_NEAR(grab(res.output, "events"), 113.19630006628847, 1e-9 * 113.2);
  EXPECT_NEAR(grab(res.output, "time_lambda0"), 113.19630006628847 / 3.0, 1e-9 * 37.7);
}

TEST(CliSolve, MalformedFileExitsTwoWithLine) {
  TempDir tmp;
  const auto bad = tmp.file("bad.topo", "n 2\nh 1.0\nedgy 0 1 1.0\n");
  const auto res = run_command(kCli + " solve " + bad.string() + " 2>&1");
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_NE(res.output.find("line 3"), std::string::npos);
}

TEST(CliSolve, MissingFileExitsTwo) {
  const auto res = run_command(kCli + " solve /no/such/file.topo 2>/dev/null");
  EXPECT_EQ(res.exit_code, 2);
}

TEST(CliSolve, OverCapacityExitsThree) {
  TempDir tmp;
  const auto big = tmp.file("big.topo", "n 13\nh 1.0\n");
  const auto res = run_command(kCli + " solve " + big.string() + " 2>/dev/null");
  EXPECT_EQ(res.exit_code, 3);
}

TEST(CliFormula, KnownValues) {
  auto res = run_command(kCli + " formula uncoupled3");
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_NE(res.output.find("events=6"), std::string::npos);
  EXPECT_DOUBLE_EQ(grab(res.output, "events_per_dipole"), 2.0);

  res = run_command(kCli + " formula linear3 --beta-s 1");
  EXPECT_NEAR(grab(res.output, "events"), 31.796911568570863, 1e-9 * 31.8);

  res = run_command(kCli + " formula linear3 --beta-s 0");
  EXPECT_DOUBLE_EQ(grab(res.output, "events"), 6.0);
}

TEST(CliFormula, GuardPrintsInf) {
  const auto res = run_command(kCli + " formula triangle --beta-s 400");
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_NE(res.output.find("events=inf"), std::string::npos);
}

TEST(CliFormula, UnknownNameExitsTwo) {
  const auto res = run_command(kCli + " formula hexagon 2>/dev/null");
  EXPECT_EQ(res.exit_code, 2);
}

TEST(CliSimulate, ByteIdenticalAcrossRunsAndThreads) {
  const std::string base = kCli + " simulate " + kData +
                           "/topologies/single.topo --h-override 0 --seed 31 --samples 2000";
  const auto a = run_command(base + " --threads 1");
  const auto b = run_command(base + " --threads 1");
  const auto c = run_command(base + " --threads 4");
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.output, b.output);
  EXPECT_EQ(a.output, c.output);
  EXPECT_NEAR(grab(a.output, "mean_events"), 2.0, 3.0 * grab(a.output, "std_error"));
  EXPECT_DOUBLE_EQ(grab(a.output, "n_censored"), 0.0);
}

TEST(CliSimulate, AllCensoredExitsFour) {
  const auto res = run_command(kCli + " simulate " + kData +
                               "/topologies/single.topo --beta 30 --samples 20 --max-events 100 "
                               "2>/dev/null");
  EXPECT_EQ(res.exit_code, 4);
}

TEST(CliSweep, WritesCsv) {
  TempDir tmp;
  const auto spec = tmp.file("mini.sweep",
                             "topology linear3\nmethod closedform\nmethod exact\n"
                             "beta_h 0\nbeta_s_list 0.5 1\n");
  const auto out = tmp.path() / "out.csv";
  const auto res = run_command(kCli + " sweep " + spec.string() + " " + out.string() + " 2>/dev/null");
  EXPECT_EQ(res.exit_code, 0);
  std::ifstream csv(out);
  ASSERT_TRUE(csv.good());
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header,
            "topology,method,beta_s,beta_h,tau_events,tau_events_per_dipole,std_error,n_censored");
  int rows = 0;
  std::string line;
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(CliSweep, EmptySweepExitsTwo) {
  TempDir tmp;
  const auto spec = tmp.file("empty.sweep", "topology linear3\nmethod exact\nbeta_h 0\n");
  const auto out = tmp.path() / "out.csv";
  const auto res =
      run_command(kCli + " sweep " + spec.string() + " " + out.string() + " 2>&1 >/dev/null");
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_NE(res.output.find("empty sweep"), std::string::npos);
}

TEST(CliSweep, UnwritableOutputExitsFive) {
  TempDir tmp;
  const auto spec = tmp.file("mini.sweep",
                             "topology single\nmethod closedform\nbeta_h 0\nbeta_s_list 1\n");
  const auto res = run_command(kCli + " sweep " + spec.string() +
                               " /nonexistent_dir/out.csv 2>/dev/null");
  EXPECT_EQ(res.exit_code, 5);
}

// The three routes agree through the CLI as well: solve vs formula at the
// couplings reachable from the shipped files, Monte Carlo within 3 sigma.
TEST(CliAgreement, SolveFormulaSimulate) {
  const std::string tri = kData + "/topologies/triangle.topo";
  const auto solved = run_command(kCli + " solve " + tri);  // raw s=1, h=1
  const auto formula = run_command(kCli + " formula triangle --beta-h 1 --beta-s 1");
  const double a = grab(solved.output, "events");
  const double b = grab(formula.output, "events");
  EXPECT_LE(std::abs(a - b) / b, 1e-9);

  const auto mc = run_command(kCli + " simulate " + tri +
                              " --h-override 0 --seed 11 --samples 30000 --threads 4");
  const double mean = grab(mc.output, "mean_events");
  const double se = grab(mc.output, "std_error");
  EXPECT_NEAR(mean, 113.19630006628847, 3.0 * se);
}

TEST(Cli, HelpExitsZero) {
  EXPECT_EQ(run_command(kCli + " --help").exit_code, 0);
  EXPECT_EQ(run_command(kCli + " solve --help").exit_code, 0);
}

TEST(Cli, MissingSubcommandExitsTwo) {
  EXPECT_EQ(run_command(kCli + " 2>/dev/null").exit_code, 2);
  EXPECT_EQ(run_command(kCli + " solve 2>/dev/null").exit_code, 2);  // missing file arg
}

}  // namespace
