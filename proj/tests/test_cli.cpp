#include <cctype>
#include <cstdlib>
#include <filesystem>

#include <gtest/gtest.h>

#include "support/cli.hpp"
#include "tracemin/problem_io.hpp"

using namespace tracemin;
using namespace tracemin::testing;
using nlohmann::json;

namespace {

const std::string kCli = TRACEMIN_CLI;
const std::string kFixtures = FIXTURE_DIR;
const std::string kGolden = GOLDEN_DIR;
const std::string kScratch = SCRATCH_DIR;

std::string fixture(const std::string& name) { return kFixtures + "/" + name + ".json"; }

CommandResult cli(const std::vector<std::string>& args, const std::string& env = "") {
  return run_command(kCli, args, env);
}

std::string scratch_file(const std::string& name, const std::string& content) {
  std::filesystem::create_directories(kScratch);
  const std::string path = kScratch + "/" + name;
  write_file(path, content);
  return path;
}

json error_of(const CommandResult& r) { return json::parse(r.out).at("error"); }

}  // namespace

class GoldenTest : public ::testing::TestWithParam<GoldenCase> {};

TEST_P(GoldenTest, MatchesGoldenFile) {
  const auto& c = GetParam();
  const auto r = cli(c.args);
  EXPECT_EQ(r.exit_code, c.exit_code);
  const std::string golden = kGolden + "/" + c.name + ".json";
  if (std::getenv("TRACEMIN_UPDATE_GOLDEN")) write_file(golden, r.out);
  const json got = json::parse(r.out);
  const json want = json::parse(read_file(golden));
  EXPECT_EQ(json_diff(got, want, 1e-9, 1e-9), "");
}

INSTANTIATE_TEST_SUITE_P(Cli, GoldenTest, ::testing::ValuesIn(golden_cases(FIXTURE_DIR)),
                         [](const ::testing::TestParamInfo<GoldenCase>& info) {
                           std::string n = info.param.name;
                           for (char& ch : n) {
                             if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
                           }
                           return n;
                         });

TEST(CliSolveTest, Examples) {
  auto r = cli({"solve", fixture("kyfan")});
  ASSERT_EQ(r.exit_code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["value"].get<double>(), 3.0);
  EXPECT_EQ(j["tool_version"], kToolVersion);

  r = cli({"solve", fixture("unbounded")});
  ASSERT_EQ(r.exit_code, 0);
  j = json::parse(r.out);
  EXPECT_FALSE(j["finite"].get<bool>());
  EXPECT_FALSE(j.contains("value"));

  r = cli({"solve", fixture("signature_coupled")});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(error_of(r)["code"], "BLOCK_STRUCTURE_VIOLATED");
}

TEST(CliSolveTest, OptimizerIsFeasible) {
  for (const auto* name : {"kyfan", "indefinite_plus"}) {
    const auto r = cli({"solve", fixture(name), "--optimizer"});
    ASSERT_EQ(r.exit_code, 0);
    const auto j = json::parse(r.out);
    const auto p = load_problem(fixture(name));
    const CMatrix x = matrix_from_json(j.at("x_opt"), "x_opt");
    EXPECT_LE(constraint_residual(x, p.b, p.constraint), 1e-8);
    EXPECT_NEAR(objective(p.a, p.d, x), j["value"].get<double>(), 1e-9);
    EXPECT_LE(j["diagnostics"]["residuals"]["constraint"].get<double>(), 1e-8);
  }
}

TEST(CliPencilTest, Examples) {
  auto r = cli({"pencil", fixture("signature_coupled")});
  ASSERT_EQ(r.exit_code, 0);
  auto j = json::parse(r.out);
  EXPECT_NEAR(j["lambda_plus"][0].get<double>(), 1.0, 1e-10);
  EXPECT_NEAR(j["lambda_minus"][0].get<double>(), -2.0, 1e-10);
  EXPECT_TRUE(j["diagonalizable"].get<bool>());

  r = cli({"pencil", fixture("jordan")});
  j = json::parse(r.out);
  EXPECT_EQ(j["m0"], 1);
  EXPECT_FALSE(j["diagonalizable"].get<bool>());

  const auto zero_b = scratch_file("zero_b.json", R"({"a": [[1, 0], [0, -1]], "b": [[0, 0], [0, 0]]})");
  r = cli({"pencil", zero_b});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(error_of(r)["code"], "NOT_PSD_PENCIL");
}

TEST(CliVerifyTest, Examples) {
  auto r = cli({"verify", fixture("kyfan")});
  ASSERT_EQ(r.exit_code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "PASS");
  EXPECT_LE(std::abs(j["gap"].get<double>()), 1e-5);

  r = cli({"verify", fixture("unbounded")});
  ASSERT_EQ(r.exit_code, 0);
  j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "PASS");
  EXPECT_TRUE(j["oracle_unbounded"].get<bool>());
  EXPECT_FALSE(j["analytic"]["finite"].get<bool>());
}

TEST(CliVerifyTest, StarvedOracleFails) {
  const auto r = cli({"verify", fixture("kyfan"), "--restarts", "1", "--iters", "1"});
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_EQ(json::parse(r.out)["verdict"], "FAIL");
}

TEST(CliCounterexampleTest, Fields) {
  auto r = cli({"counterexample", "--mu", "2", "--delta", "0.25"});
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  for (const char* key : {"gamma", "nu", "tau_star", "sigma_star", "f_at_minus", "bound", "margin"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_GT(j["margin"].get<double>(), 0.0);
  EXPECT_NEAR(j["bound"].get<double>(), 1.5, 1e-15);

  r = cli({"counterexample", "--mu", "2", "--delta", "0.6"});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(error_of(r)["code"], "DOMAIN_ERROR");
}

TEST(CliExitCodes, InputAndRouteErrors) {
  auto r = cli({"solve", kScratch + "/does_not_exist.json"});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(error_of(r)["code"], "PARSE_ERROR");

  r = cli({"solve", scratch_file("broken.json", "{\"a\": [[1]")});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(error_of(r)["code"], "PARSE_ERROR");

  r = cli({"solve", scratch_file("max_indefinite.json",
                                 R"({"a": [[1, 0], [0, 2]], "b": [[1, 0], [0, -1]], "d": [[1]], "sense": "max"})")});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(error_of(r)["code"], "UNSUPPORTED_SENSE");

  r = cli({"solve", scratch_file("infeasible.json",
                                 R"({"a": [[1, 0], [0, 2]], "b": [[1, 0], [0, 1]], "d": [[1]], "constraint": "minus_identity"})")});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(error_of(r)["code"], "INFEASIBLE_CONSTRAINT");

  r = cli({"frobnicate"});
  EXPECT_EQ(r.exit_code, 1);
  r = cli({"solve"});
  EXPECT_EQ(r.exit_code, 1);
}

TEST(CliDeterminism, RepeatedRunsAreByteIdentical) {
  for (const auto& args : std::vector<std::vector<std::string>>{{"solve", fixture("indefinite_plus"), "--optimizer"},
                                                                {"pencil", fixture("jordan")},
                                                                {"verify", fixture("indefinite_plus"), "--seed", "3"}}) {
    EXPECT_EQ(cli(args).out, cli(args).out);
  }
  // The seed falls back to TRACEMIN_SEED.
  const auto a = cli({"verify", fixture("kyfan")}, "TRACEMIN_SEED=5");
  const auto b = cli({"verify", fixture("kyfan"), "--seed", "5"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out)["seed"], 5);
}

TEST(CliRoundTrip, JsonReparsesToSameBytes) {
  for (const auto& c : golden_cases(kFixtures)) {
    const auto r = cli(c.args);
    const json j = json::parse(r.out);
    EXPECT_EQ(j.dump(2) + "\n", r.out) << c.name;
    EXPECT_EQ(json::parse(j.dump()), j) << c.name;
  }
}

TEST(CliRoundTrip, TextModeHasSameContent) {
  for (const auto& c : golden_cases(kFixtures)) {
    auto text_args = c.args;
    text_args.push_back("--text");
    const auto json_run = cli(c.args);
    const auto text_run = cli(text_args);
    EXPECT_EQ(text_run.exit_code, json_run.exit_code) << c.name;
    EXPECT_EQ(text_run.out, render_text(json::parse(json_run.out))) << c.name;
  }
}
