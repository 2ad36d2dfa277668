#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"

namespace {

const std::filesystem::path kFixtures = EQREC_FIXTURES;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result run(const std::string& args) {
  const auto dir = std::filesystem::temp_directory_path() / "eqrec_cli_test";
  std::filesystem::create_directories(dir);
  const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + EQREC_CLI + "\" " + args + " >\"" + out.string() +
                          "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string fixture(const std::string& rel) { return "\"" + (kFixtures / rel).string() + "\""; }

}  // namespace

TEST(Cli, AnalyzeToyTable) {
  const Result r = run("analyze " + fixture("t1/table.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["country"], "T1");
  EXPECT_EQ(j["recession_set"], nlohmann::json::parse("[2]"));
  EXPECT_NEAR(j["r"].get<double>(), 0.105769, 1e-6);
  EXPECT_EQ(run("analyze " + fixture("t1/table.csv")).out, r.out);
}

TEST(Cli, AnalyzeFormatsAndOptions) {
  const Result csv = run("analyze " + fixture("t1/table.csv") + " --format csv");
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_EQ(csv.out.rfind("industry_index,industry_name,demand", 0), 0u);
  const Result text = run("analyze " + fixture("t1/table.csv") + " --format text --top 1");
  ASSERT_EQ(text.code, 0) << text.err;
  EXPECT_NE(text.out.find("Beta"), std::string::npos);
  const Result half = run("analyze " + fixture("t1/table.csv") + " --pi " + fixture("t1/pi_half.csv"));
  ASSERT_EQ(half.code, 0) << half.err;
  EXPECT_EQ(nlohmann::json::parse(half.out)["pi"], nlohmann::json::parse("[0.5,0.5]"));
  const Result agg = run("analyze " + fixture("t1/table.csv") + " --aggregate " +
                         fixture("t1/blocks.csv"));
  ASSERT_EQ(agg.code, 0) << agg.err;
  EXPECT_EQ(nlohmann::json::parse(agg.out)["diagnostics"]["industries"], 1);
}

TEST(Cli, WritesReportFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "eqrec_cli_out";
  std::filesystem::remove_all(dir);
  const Result r = run("analyze " + fixture("t1/table.csv") + " --out \"" + dir.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"report.json", "deficits.csv", "histogram.csv"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  EXPECT_EQ(slurp(dir / "report.json"), r.out);
}

TEST(Cli, InputErrorsExitTwo) {
  for (const char* bad : {"bad/empty.csv", "bad/header.csv", "bad/text_cell.csv",
                          "bad/negative.csv", "missing.csv"}) {
    const Result r = run("analyze " + fixture(bad));
    EXPECT_EQ(r.code, 2) << bad;
    EXPECT_FALSE(r.err.empty()) << bad;
  }
  EXPECT_EQ(run("analyze " + fixture("bad/negative.csv") + " --clamp-negative").code, 0);
  EXPECT_EQ(run("analyze " + fixture("t1/table.csv") + " --pi " + fixture("t1/pi_short.csv")).code,
            2);
  EXPECT_EQ(run("analyze " + fixture("t1/table.csv") + " --pi 1.5").code, 2);
  EXPECT_EQ(run("analyze " + fixture("t1/table.csv") + " --format xml").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(Cli, EquilibriumExitCodes) {
  const Result ok = run("equilibrium " + fixture("certified/table.csv"));
  ASSERT_EQ(ok.code, 0) << ok.err;
  EXPECT_EQ(nlohmann::json::parse(ok.out)["certified"], true);
  const Result autarky = run("equilibrium " + fixture("autarky/table.csv"));
  EXPECT_EQ(autarky.code, 4) << autarky.err;
  const auto j = nlohmann::json::parse(autarky.out);
  EXPECT_NEAR(j["rho"].get<double>(), 0.4, 1e-6);
  EXPECT_EQ(j["value_equilibrium"]["is_equilibrium"], true);
}

TEST(Cli, Demo) {
  const Result e2 = run("demo E2");
  ASSERT_EQ(e2.code, 0) << e2.err;
  EXPECT_EQ(nlohmann::json::parse(e2.out)["passed"], true);
  EXPECT_EQ(run("demo E1 --format text").code, 0);
  const Result rnd = run("demo random:seed=42,n=4,l=3,I=2");
  EXPECT_EQ(rnd.code, 0) << rnd.out;
  EXPECT_EQ(run("demo random:seed=42,n=4,l=3,I=2").out, rnd.out);
  EXPECT_EQ(run("demo E9").code, 2);
}
