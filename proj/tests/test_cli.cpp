#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "cli.hpp"

using mapu::cli::Options;
using mapu::cli::RunReport;
namespace fs = std::filesystem;

namespace {

std::string fixture_path(const char* name) {
  return std::string(MAPU_FIXTURES_DIR) + "/" + name;
}

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("mapu_cli_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Process {
  int exit_code;
  std::string out;
};

Process run_binary(const std::string& args) {
  const std::string cmd = std::string(MAPU_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

}  // namespace

TEST(CmdSolve, ReferenceInstances) {
  Options opt;
  RunReport r = mapu::cli::cmd_solve(fixture_path("sec2.json"), opt);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.result["value"]["exact"], "3");
  r = mapu::cli::cmd_solve(fixture_path("sec32.json"), opt);
  EXPECT_EQ(r.result["value"]["exact"], "6");
  EXPECT_EQ(r.result["value"]["approx"], "6.000000");
}

TEST(CmdSolve, VerifyAndTrace) {
  Options opt;
  opt.verify = true;
  opt.trace = true;
  RunReport r = mapu::cli::cmd_solve(fixture_path("greedy.json"), opt);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.result["verified"], true);
  ASSERT_TRUE(r.trace.has_value());
  EXPECT_TRUE(r.trace->contains("narrowing"));
  opt.cap = 2;
  r = mapu::cli::cmd_solve(fixture_path("greedy.json"), opt);
  EXPECT_TRUE(r.result["verified"].is_null());
}

TEST(CmdSolve, InputErrorsExitOne) {
  Options opt;
  EXPECT_EQ(mapu::cli::cmd_solve("/nonexistent.json", opt).exit_code, 1);
  const fs::path dir = temp_dir("bad");
  std::ofstream(dir / "bad.json") << R"({"suppliers": [}, "k": 1})";
  RunReport r = mapu::cli::cmd_solve((dir / "bad.json").string(), opt);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.error.find("line"), std::string::npos) << r.error;
}

TEST(CmdOracle, CapExitsThree) {
  Options opt;
  EXPECT_EQ(mapu::cli::cmd_oracle(fixture_path("sec2.json"), opt).result["value"]["exact"], "3");
  opt.cap = 1;
  EXPECT_EQ(mapu::cli::cmd_oracle(fixture_path("sec2.json"), opt).exit_code, 3);
}

TEST(CmdGreedy, ReportsSuboptimality) {
  Options opt;
  RunReport r = mapu::cli::cmd_greedy(fixture_path("greedy.json"), opt);
  EXPECT_EQ(r.result["value"]["exact"], "12");
  EXPECT_EQ(r.result["oracle_value"]["exact"], "11");
  EXPECT_EQ(r.result["suboptimal"], true);
}

TEST(CmdHProfile, Convex) {
  Options opt;
  RunReport r = mapu::cli::cmd_hprofile(fixture_path("greedy.json"), opt);
  EXPECT_EQ(r.result["convex"], true);
  EXPECT_EQ(r.result["non_increasing"], true);
  EXPECT_EQ(r.result["h"][2]["exact"], "11");
}

TEST(CmdSchedule, SptAndVerify) {
  Options opt;
  opt.verify = true;
  RunReport r = mapu::cli::cmd_schedule(fixture_path("schedule_spt.json"), opt);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.result["total_completion"]["exact"], "10");
  EXPECT_EQ(r.result["verified"], true);
  r = mapu::cli::cmd_schedule(fixture_path("schedule_uniform.json"), opt);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.result["verified"], true);
}

TEST(CmdVerifyFixtures, BuiltinAndDirectory) {
  Options opt;
  EXPECT_EQ(mapu::cli::cmd_verify_fixtures(opt).exit_code, 0);
  opt.fixtures_dir = MAPU_FIXTURES_DIR;
  RunReport r = mapu::cli::cmd_verify_fixtures(opt);
  EXPECT_EQ(r.exit_code, 0) << r.error;
  EXPECT_EQ(r.result["fixtures"].size(), 5u);
}

TEST(CmdVerifyFixtures, CorruptedDemandExitsTwo) {
  const fs::path dir = temp_dir("corrupt");
  auto j = mapu::io::parse_text(mapu::io::read_file(fixture_path("partition.json")), "p");
  j["customers"][0]["demand"] = "5";
  std::ofstream(dir / "partition.json") << j.dump();
  Options opt;
  opt.fixtures_dir = dir.string();
  RunReport r = mapu::cli::cmd_verify_fixtures(opt);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.error.find("partition"), std::string::npos);
  EXPECT_NE(r.error.find("expected 23"), std::string::npos) << r.error;
}

TEST(CmdVerifyFixtures, EmptyDirectoryExitsOne) {
  Options opt;
  opt.fixtures_dir = temp_dir("empty").string();
  EXPECT_EQ(mapu::cli::cmd_verify_fixtures(opt).exit_code, 1);
}

TEST(CmdSweep, AgreesAndIsDeterministic) {
  Options opt;
  opt.count = 40;
  opt.max_n = 6;
  opt.seed = 9;
  RunReport a = mapu::cli::cmd_sweep(opt);
  RunReport b = mapu::cli::cmd_sweep(opt);
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.result["mismatches"], 0);
  EXPECT_EQ(mapu::cli::to_json(a, false), mapu::cli::to_json(b, false));
}

TEST(Report, DigestIsSha256) {
  EXPECT_EQ(mapu::cli::sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Binary, ExitCodesAndFormats) {
  Process p = run_binary("solve " + fixture_path("sec2.json"));
  EXPECT_EQ(p.exit_code, 0);
  auto j = mapu::io::json::parse(p.out);
  EXPECT_EQ(j["result"]["value"]["exact"], "3");
  EXPECT_EQ(j["input_sha256"].get<std::string>().size(), 64u);

  p = run_binary("solve " + fixture_path("sec32.json") + " --format text");
  EXPECT_EQ(p.exit_code, 0);
  EXPECT_NE(p.out.find("result.value: 6 (~6.000000)"), std::string::npos) << p.out;

  EXPECT_EQ(run_binary("oracle --cap 1 " + fixture_path("sec2.json")).exit_code, 3);
  EXPECT_EQ(run_binary("solve /nonexistent.json").exit_code, 1);
  EXPECT_EQ(run_binary("verify-fixtures").exit_code, 0);
  EXPECT_EQ(run_binary("--bogus-flag solve x").exit_code, 1);
}
