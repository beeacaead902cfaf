#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "covertnet/cli.hpp"

namespace covertnet {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("covertnet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& text) {
    const fs::path p = dir_ / "cfg.json";
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

TEST_F(CliTest, UnknownSubcommandPrintsUsage) {
  const CliRun r = run({"frobnicate"});
  EXPECT_EQ(r.code, kExitConfigError);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({}).code, kExitConfigError);
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  EXPECT_EQ(run({"solve", "--config", write_config("{\"epsilon\": 1.5}").string()}).code,
            kExitConfigError);
  EXPECT_EQ(run({"solve", "--config", write_config("{not json").string()}).code,
            kExitConfigError);
  EXPECT_EQ(run({"sweep", "--policy", "drop"}).code, kExitConfigError);
}

TEST_F(CliTest, SolveInfeasibleAtReferenceJammer) {
  const CliRun r = run({"solve", "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitInfeasible);
  EXPECT_TRUE(fs::exists(dir_ / "solve.csv"));
}

TEST_F(CliTest, SolveWritesHeaderAndEcho) {
  const auto cfg = write_config("{\"p_jmax_dbw\": 20}");
  const CliRun r = run({"solve", "--config", cfg.string(), "--seed", "4", "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const std::string csv = slurp(dir_ / "solve.csv");
  EXPECT_EQ(csv.rfind("# covertnet ", 0), 0u);
  EXPECT_NE(csv.find("# seed=4\n"), std::string::npos);
  EXPECT_NE(csv.find("# params_hash="), std::string::npos);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_NE(slurp(dir_ / "solve.config.json").find("\"p_jmax_dbw\": 20.0"), std::string::npos);
}

TEST_F(CliTest, ReproduceIsByteIdentical) {
  const auto a = dir_ / "a";
  const auto b = dir_ / "b";
  ASSERT_EQ(run({"reproduce", "fig3", "--trials", "20", "--out", a.string()}).code, kExitOk);
  ASSERT_EQ(run({"reproduce", "fig3", "--trials", "20", "--out", b.string()}).code, kExitOk);
  EXPECT_EQ(slurp(a / "fig3.csv"), slurp(b / "fig3.csv"));
  ASSERT_EQ(run({"reproduce", "fig3", "--trials", "20", "--seed", "2", "--out", b.string()}).code,
            kExitOk);
  EXPECT_NE(slurp(a / "fig3.csv"), slurp(b / "fig3.csv"));
}

TEST_F(CliTest, PowerPresetRecordsJammerBudget) {
  ASSERT_EQ(run({"reproduce", "fig7", "--trials", "10", "--out", dir_.string()}).code, kExitOk);
  const std::string csv = slurp(dir_ / "fig7.csv");
  EXPECT_NE(csv.find("# p_jmax_dbw=20\n"), std::string::npos);
  EXPECT_NE(csv.find("\np_max_dbw,mean_rate,se,outage,"), std::string::npos);
}

TEST_F(CliTest, DetectAndSurface) {
  EXPECT_EQ(run({"detect", "--out", dir_.string()}).code, kExitOk);
  EXPECT_NE(slurp(dir_ / "detect.csv").find("d_aw,d_jw,min_error,covert"), std::string::npos);
  EXPECT_EQ(run({"reproduce", "fig2", "--out", dir_.string()}).code, kExitOk);
}

TEST_F(CliTest, SweepAllInfeasibleExitsThree) {
  const CliRun r = run({"sweep", "--trials", "5", "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitInfeasible);
}

TEST_F(CliTest, ValidatePasses) {
  const CliRun r = run({"validate", "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, BadFigure) {
  EXPECT_EQ(run({"reproduce", "fig9"}).code, kExitConfigError);
}

}  // namespace
}  // namespace covertnet
