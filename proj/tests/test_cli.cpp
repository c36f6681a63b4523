#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rungscope/cli.hpp"
#include "rungscope/output.hpp"

using namespace rungscope;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "rungscope");
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rungscope_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Broad-cavity toy system so a full simulate takes about a second.
std::vector<std::string> toy_args(const fs::path& dir) {
  return {"--scenario", "disk", "--g", "2", "--gamma-cav", "0.3", "--mode-count", "41",
          "--pump-sigma-over-g", "0.3", "--alpha", "0.2", "--output-dir", dir.string()};
}

void expect_manifest_consistent(const fs::path& dir, const std::string& manifest_name) {
  const auto doc = nlohmann::json::parse(slurp(dir / manifest_name));
  std::set<std::string> listed;
  for (const auto& entry : doc["outputs"]) {
    const auto name = entry["path"].get<std::string>();
    listed.insert(name);
    EXPECT_EQ(sha256_hex(slurp(dir / name)), entry["sha256"].get<std::string>()) << name;
  }
  for (const auto& file : fs::directory_iterator(dir)) {
    const auto name = file.path().filename().string();
    if (name != manifest_name) EXPECT_TRUE(listed.count(name)) << name << " not in manifest";
  }
}

}  // namespace

TEST(Cli, AnalyticsReportsOptimumPump) {
  const auto r = invoke({"analytics", "--scenario", "disk"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("7.778"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("4.556"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrorsAreNonzero) {
  EXPECT_NE(invoke({}).code, kExitOk);
  EXPECT_NE(invoke({"transmogrify"}).code, kExitOk);
  EXPECT_EQ(invoke({"analytics", "--scenario", "moon"}).code, kExitConfig);
  EXPECT_EQ(invoke({"analytics", "--gamma-P", "banana"}).code, kExitConfig);
}

TEST(Cli, MissingConfigFileIsIoError) {
  EXPECT_EQ(invoke({"analytics", "--config", "/nonexistent/rungscope.ini"}).code, kExitIo);
}

TEST(Cli, StepAboveBoundWritesNothing) {
  const auto dir = fresh("dt");
  auto args = toy_args(dir);
  args.insert(args.begin(), "simulate");
  args.insert(args.end(), {"--dt", "0.5"});
  const auto r = invoke(args);
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("dt"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir));
}

TEST(Cli, ConfigFileWithCommandLineOverride) {
  const auto dir = fresh("cfgfile");
  fs::create_directories(dir);
  std::ofstream(dir / "run.ini") << "[system]\nscenario = pillar\ngamma_P = 0.23\n";
  const auto r = invoke({"analytics", "--config", (dir / "run.ini").string(), "--g", "10"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("7.07107"), std::string::npos) << r.out;
  fs::remove_all(dir);
}

TEST(Cli, SimulateIsByteReproducible) {
  const auto a = fresh("sim_a"), b = fresh("sim_b");
  auto args_a = toy_args(a), args_b = toy_args(b);
  args_a.insert(args_a.begin(), "simulate");
  args_b.insert(args_b.begin(), "simulate");
  args_a.push_back("--svg");
  args_b.push_back("--svg");
  const auto ra = invoke(args_a);
  ASSERT_EQ(ra.code, kExitOk) << ra.err;
  ASSERT_EQ(invoke(args_b).code, kExitOk);
  for (const char* name : {"spectrum.csv", "peaks.csv", "trajectory.csv", "spectrum.svg"}) {
    ASSERT_TRUE(fs::exists(a / name)) << name;
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
  expect_manifest_consistent(a, "simulate_manifest.json");
  EXPECT_EQ(slurp(a / "spectrum.csv").rfind("omega_offset_GHz,intensity,g2\n", 0), 0u);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, SweepWritesTable) {
  const auto dir = fresh("sweep");
  auto args = toy_args(dir);
  args.insert(args.begin(), "sweep");
  args.insert(args.end(), {"--sweep-kind", "dephasing", "--sweep-from", "0.1", "--sweep-to", "1",
                           "--sweep-count", "2"});
  const auto r = invoke(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto table = slurp(dir / "sweep_dephasing.csv");
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 3);
  expect_manifest_consistent(dir, "sweep_dephasing_manifest.json");
  fs::remove_all(dir);
}

TEST(Cli, SweepWithoutKindIsConfigError) {
  const auto dir = fresh("sweep_none");
  auto args = toy_args(dir);
  args.insert(args.begin(), "sweep");
  EXPECT_EQ(invoke(args).code, kExitConfig);
  EXPECT_FALSE(fs::exists(dir));
}

TEST(Cli, OracleValidateWritesReport) {
  const auto dir = fresh("oracle");
  const auto r = invoke({"oracle-validate", "--scenario", "disk", "--oracle-n-max", "6",
                         "--output-dir", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* name : {"oracle_equivalence.csv", "oracle_factorization.csv", "oracle_report.txt"}) {
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  }
  expect_manifest_consistent(dir, "oracle_manifest.json");
  fs::remove_all(dir);
}
