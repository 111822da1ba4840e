#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "orbcorr_cli/cli.hpp"

namespace fs = std::filesystem;
using namespace orbcorr::cli;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "orbcorr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("orbcorr_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

constexpr const char* kBell = "CIVEC 1\nmodes 4 electrons 2\ndet 0110 0.7071067811865476\ndet 1001 0.7071067811865476\n";

}  // namespace

TEST_F(CliTest, ValidateReportsCounts) {
  const auto r = run({"validate", "--input", write("bell.civec", kBell)});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("ok: 4 modes, 2 electrons, 2 terms, 2 determinants", 0), 0u) << r.out;
}

TEST_F(CliTest, EntropyCostPrintsOneRowPerRule) {
  const auto r = run({"entropy-cost", "--input", write("bell.civec", kBell), "--ssr", "parity,number"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "ssr,entropy_cost_bits,sectors\nparity,0.000000,1\nnumber,0.000000,1\n");
}

TEST_F(CliTest, ReportWritesArtifacts) {
  const auto input = write("mol.civec", oracle::synthetic_cisd_text(4, 4, 5));
  const auto out = dir_ / "out";
  const auto r = run({"report", "--input", input, "--window", "2:4", "--restarts", "6", "--out", out.string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(out / "report.csv"));
  EXPECT_TRUE(fs::exists(out / "table.txt"));
  EXPECT_TRUE(fs::exists(out / "heatmap_I_parity.csv"));
  EXPECT_TRUE(fs::exists(out / "heatmap_D_number.csv"));
  EXPECT_EQ(slurp(out / "table.txt"), r.out);
  const std::string csv = slurp(out / "report.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 * 2);

  const auto json_dir = dir_ / "json";
  const auto j = run({"report", "--input", input, "--pairs", "(2,3)", "--format", "json", "--ssr", "number",
                      "--restarts", "6", "--out", json_dir.string()});
  EXPECT_EQ(j.code, kExitOk) << j.err;
  EXPECT_NE(slurp(json_dir / "report.json").find("\"orbcorr-report\""), std::string::npos);
}

TEST_F(CliTest, InputErrorsExitWithTwo) {
  EXPECT_EQ(run({"validate", "--input", write("bad.civec", "CIVEC 1\nmodes 4 electrons 2\ndet 01x0 1.0\n")}).code,
            kExitInputError);
  EXPECT_EQ(run({"validate", "--input", (dir_ / "missing.civec").string()}).code, kExitInputError);
  EXPECT_EQ(run({"report", "--input", write("b.civec", kBell), "--pairs", "(1,5)", "--out", dir_.string()}).code,
            kExitInputError);
  EXPECT_EQ(run({"report", "--input", write("c.civec", kBell), "--format", "xml"}).code, kExitInputError);
  EXPECT_EQ(run({"report", "--input", write("d.civec", kBell), "--ssr", "bogus", "--out", dir_.string()}).code,
            kExitInputError);
  EXPECT_EQ(run({"frobnicate"}).code, kExitInputError);
  EXPECT_EQ(run({}).code, kExitInputError);
}

TEST_F(CliTest, UnnormalizedDeterminantsAreNormalized) {
  const auto r = run({"validate", "--input", write("u.civec", "CIVEC 1\nmodes 4 electrons 2\ndet 1100 2.0\n")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("input norm 2"), std::string::npos) << r.out;
}
