#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace pauli_cloner;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "pauli-cloner");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

cli::json fidelities(std::vector<std::string> args) {
  args.insert(args.begin(), "fidelities");
  const auto r = invoke(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return cli::json::parse(r.out);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("pauli_cloner_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(CliHelpers, ParseRange) {
  const auto r = cli::parse_range("0.5:0.6:0.05");
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[2], 0.6, 1e-12);
  EXPECT_EQ(cli::parse_range("0.7,0.8").size(), 2u);
  EXPECT_EQ(cli::parse_range("0.25:1.0:0.05").size(), 16u);
  EXPECT_THROW(cli::parse_range("1:0:0.1"), ArgumentError);
  EXPECT_THROW(cli::parse_range("0:1:0"), ArgumentError);
  EXPECT_THROW(cli::parse_range("0:1"), ArgumentError);
  EXPECT_THROW(cli::parse_range("a,b"), ArgumentError);
}

TEST(CliHelpers, Presets) {
  EXPECT_EQ(cli::preset_program("uqcm-sym", ClonerKind::NG, 3).size(), 64u);
  EXPECT_THROW(cli::preset_program("pccm-sym", ClonerKind::NG, 2), ArgumentError);
  EXPECT_THROW(cli::preset_program("imbalanced(x)", ClonerKind::NG, 1), ArgumentError);
  EXPECT_THROW(cli::preset_program("nope", ClonerKind::NG, 1), ArgumentError);
  EXPECT_NO_THROW(cli::preset_program("imbalanced(2)", ClonerKind::NG, 1));
}

TEST(CliFidelities, UqcmPresets) {
  const auto one = fidelities({"--preset", "uqcm-sym", "--n", "1"});
  EXPECT_DOUBLE_EQ(one["F_AB_avg"].get<double>(), 0.833333333333);
  EXPECT_DOUBLE_EQ(one["F_AE_avg"].get<double>(), 0.833333333333);
  EXPECT_EQ(one["bases"].size(), 3u);
  const auto two = fidelities({"--preset", "uqcm-sym", "--n", "2"});
  for (const auto& b : two["bases"]) EXPECT_DOUBLE_EQ(b["F_AB"].get<double>(), 0.7);
  const auto qid = fidelities({"--kind", "qid", "--preset", "qid-uqcm-sym", "--n", "2", "--method", "analytic"});
  for (const auto& b : qid["bases"]) EXPECT_DOUBLE_EQ(b["F_AE"].get<double>(), 0.7);
  const auto three = fidelities({"--preset", "uqcm-sym", "--n", "3"});
  EXPECT_DOUBLE_EQ(three["F_AB_avg"].get<double>(), 0.611111111111);
  EXPECT_EQ(three["bases"][0]["label"], "computational");
}

TEST(CliFidelities, NoisyIdentityProgram) {
  const auto j = fidelities({"--amplitudes", "1,0,0,0", "--noise", "X=0.25"});
  EXPECT_EQ(j["channel"], "X=0.25");
  for (const auto& b : j["bases"]) {
    if (b["label"] == "Z") {
      EXPECT_DOUBLE_EQ(b["F_AB"].get<double>(), 0.75);
    } else if (b["label"] == "X") {
      EXPECT_DOUBLE_EQ(b["F_AB"].get<double>(), 1.0);
    }
  }
  const auto a = fidelities({"--amplitudes", "1,0,0,0", "--noise", "X=0.25", "--method", "analytic"});
  EXPECT_EQ(a["bases"], j["bases"]);
  EXPECT_DOUBLE_EQ(a["F_AB_avg"].get<double>(), j["F_AB_avg"].get<double>());
}

TEST(CliFidelities, SourcesBasesAndCsv) {
  const auto ang = fidelities({"--angles", "0.7853981633974483,0.7853981633974483,0", "--kind", "qid", "--bases", "X"});
  ASSERT_EQ(ang["bases"].size(), 1u);
  EXPECT_DOUBLE_EQ(ang["bases"][0]["F_AB"].get<double>(), 0.853553390593);
  const auto cplx = fidelities({"--amplitudes", "0.5,0.5,0,0.5", "--imag", "0,0,0.5,0"});
  EXPECT_DOUBLE_EQ(cplx["program"]["imag"][2].get<double>(), 0.5);
  std::string zeros = "0";
  for (int i = 1; i < 60; ++i) zeros += ",0";
  const auto prep = fidelities({"--ansatz-params", zeros,
                                "--n", "2", "--bases", "M0"});
  EXPECT_DOUBLE_EQ(prep["bases"][0]["F_AB"].get<double>(), 1.0);

  const auto dir = scratch("fid");
  fidelities({"--preset", "pccm-sym", "--csv", (dir / "f.csv").string()});
  const auto text = slurp(dir / "f.csv");
  EXPECT_NE(text.find("basis,F_AB,F_AE\nZ,"), std::string::npos);
  fs::remove_all(dir);
}

TEST(CliFidelities, Errors) {
  EXPECT_EQ(invoke({"fidelities"}).code, 2);
  EXPECT_EQ(invoke({"fidelities", "--preset", "uqcm-sym", "--amplitudes", "1,0,0,0"}).code, 2);
  EXPECT_EQ(invoke({"fidelities", "--amplitudes", "1,0,0"}).code, 2);
  EXPECT_EQ(invoke({"fidelities", "--amplitudes", "1,1,0,0"}).code, 2);
  EXPECT_EQ(invoke({"fidelities", "--amplitudes", "1,0,0,0", "--imag", "0"}).code, 2);
  EXPECT_EQ(invoke({"fidelities", "--amplitudes", "1,0,0,0", "--noise", "X=2"}).code, 2);
  EXPECT_EQ(invoke({"fidelities", "--kind", "qid", "--n", "3", "--preset", "uqcm-sym"}).code, 2);
  EXPECT_EQ(invoke({"fidelities", "--kind", "xyz", "--preset", "uqcm-sym"}).code, 2);
  EXPECT_EQ(invoke({"fidelities", "--preset", "uqcm-sym", "--method", "magic"}).code, 2);
  EXPECT_EQ(invoke({"fidelities", "--preset", "uqcm-sym", "--n", "2", "--noise", "XI=0.1", "--method", "analytic"}).code,
            2);
  const auto cplx = invoke({"fidelities", "--n", "2", "--method", "analytic", "--amplitudes",
                         "1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0", "--imag", "0,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0"});
  EXPECT_EQ(cplx.code, 2);
  EXPECT_NE(cplx.err.find("error:"), std::string::npos);
  EXPECT_EQ(invoke({"bogus"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(CliValidate, PassesAndReportsCorruption) {
  const auto ok = invoke({"validate", "--trials", "10", "--seed", "4"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("PASS ng2q-oracle"), std::string::npos);
  EXPECT_NE(ok.out.find("all checks passed"), std::string::npos);

  ValidationOptions bad;
  bad.ng2q[1].bob.squares = {0, 1, 2, 4};
  std::ostringstream out;
  EXPECT_EQ(cli::cmd_validate(10, 4, out, &bad), 1);
  EXPECT_NE(out.str().find("FAIL ng2q-oracle"), std::string::npos);
  EXPECT_NE(out.str().find("validation FAILED"), std::string::npos);
  EXPECT_EQ(invoke({"validate", "--trials", "0"}).code, 2);
}

TEST(CliMubsAndTable, Output) {
  const auto m = invoke({"mubs", "--n", "2", "--check"});
  EXPECT_EQ(m.code, 0);
  EXPECT_NE(m.out.find("M2:\n  0: (0.5, -0.5, 0.5i, 0.5i)"), std::string::npos);
  EXPECT_NE(m.out.find("max unbiasedness deviation"), std::string::npos);
  EXPECT_EQ(invoke({"mubs", "--n", "3"}).code, 2);

  const auto t1 = invoke({"table", "--n", "1"});
  EXPECT_EQ(t1.code, 0);
  EXPECT_NE(t1.out.find("X\t0\t1\t1"), std::string::npos);
  const auto t2 = invoke({"table", "--n", "2"});
  EXPECT_EQ(t2.code, 0);
  EXPECT_NE(t2.out.find("XZ,YX,ZY\t1\t1\t1\t1\t0"), std::string::npos);
  const auto t3 = invoke({"table", "--n", "3"});
  EXPECT_EQ(t3.code, 0);
  EXPECT_EQ(t3.out.rfind("9 classes of 7\n", 0), 0u);
  EXPECT_EQ(invoke({"table", "--n", "4"}).code, 2);
}

TEST(CliSweep, WritesDeterministicCsv) {
  const auto dir = scratch("sweep");
  const auto a = invoke({"sweep", "--task", "bb84", "--noise", "X=0.25", "--f", "0.6:0.7:0.05", "--seed", "2", "--out",
                      (dir / "a.csv").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("a_ng.csv (3 rows)"), std::string::npos);
  const auto b = invoke({"sweep", "--task", "bb84", "--noise", "X=0.25", "--f", "0.6:0.7:0.05", "--seed", "2", "--out",
                      (dir / "b.csv").string()});
  ASSERT_EQ(b.code, 0);
  for (const char* s : {"ng", "qid", "pccm"}) {
    const auto ta = slurp(dir / ("a_" + std::string(s) + ".csv"));
    const auto tb = slurp(dir / ("b_" + std::string(s) + ".csv"));
    EXPECT_EQ(ta, tb) << s;
    EXPECT_EQ(ta.rfind("# pauli-cloner sweep\n# task=bb84\n# series=", 0), 0u);
    EXPECT_NE(ta.find("# noise=X=0.25\n"), std::string::npos);
    EXPECT_NE(ta.find("f_target,F_AB_avg,F_AE_avg,F_AB_Z,F_AE_Z,F_AB_X,F_AE_X,params\n0.6,"), std::string::npos);
  }
  const auto single = invoke({"sweep", "--task", "six", "--series", "uqcm", "--f", "0.8", "--out",
                           (dir / "u.csv").string()});
  EXPECT_EQ(single.code, 0);
  EXPECT_TRUE(fs::exists(dir / "u.csv"));
  fs::remove_all(dir);
}

TEST(CliSweep, Errors) {
  EXPECT_EQ(invoke({"sweep", "--task", "bb84", "--f", "1:0:0.1"}).code, 2);
  EXPECT_EQ(invoke({"sweep", "--task", "nope"}).code, 2);
  EXPECT_EQ(invoke({"sweep", "--task", "bb84", "--pairs", "01"}).code, 2);
  EXPECT_EQ(invoke({"sweep", "--task", "pairs", "--pairs", "0x"}).code, 2);
  EXPECT_EQ(invoke({"sweep", "--task", "b92", "--noise", "X=0.1"}).code, 2);
  EXPECT_EQ(invoke({"sweep", "--task", "bb84", "--steps", "0", "--f", "0.8"}).code, 2);
  EXPECT_EQ(invoke({"optimize", "--task", "bb84", "--series", "ng,qid"}).code, 2);
}

TEST(CliOptimize, Json) {
  const auto r = invoke({"optimize", "--task", "bb84", "--series", "ng", "--f", "0.8", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = cli::json::parse(r.out);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["series"], "ng");
  EXPECT_EQ(j[0]["params"].size(), 3u);
  const double fb = j[0]["F_AB_avg"], fe = j[0]["F_AE_avg"];
  EXPECT_NEAR((fb - 0.5) * (fb - 0.5) + (fe - 0.5) * (fe - 0.5), 0.25, 1e-4);
}
