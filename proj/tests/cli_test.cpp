// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "gtest/gtest.h"
#include "linkcode/io.hpp"

namespace linkcode {
namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "linkcode");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::Run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("linkcode_cli_" + std::to_string(::testing::UnitTest::GetInstance()
                                                 ->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& text) {
    const std::filesystem::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  std::filesystem::path dir_;
};

const char* kThreeLinksOneMessage =
    R"({"links": [{"capacity": 1, "outage_prob": 0.1},
                  {"capacity": 1, "outage_prob": 0.2},
                  {"capacity": 1, "outage_prob": 0.3}],
        "messages": [{"size": 1, "worth": 1}]})";

const char* kThreeLinksTwoMessages =
    R"({"links": [{"capacity": 1, "outage_prob": 0.1},
                  {"capacity": 0, "outage_prob": 0.2},
                  {"capacity": 0, "outage_prob": 0.3}],
        "messages": [{"size": 1, "worth": 2}, {"size": 1, "worth": 1}]})";

TEST(IoTest, ScenarioRoundTrip) {
  const Scenario s = ParseScenario(kThreeLinksTwoMessages);
  EXPECT_EQ(s.num_links(), 3);
  EXPECT_EQ(s.messages[0].worth_per_unit, 2.0);
  const Scenario back = ScenarioFromJson(ScenarioToJson(s));
  EXPECT_EQ(ScenarioToJson(back), ScenarioToJson(s));
}

TEST(IoTest, RejectsBadScenarios) {
  EXPECT_THROW(ParseScenario(R"({"links": [], "messages": [], "extra": 1})"),
               InputError);
  EXPECT_THROW(
      ParseScenario(R"({"links": [{"capacity": 1, "outage": 0.1}], "messages": []})"),
      InputError);
  EXPECT_THROW(
      ParseScenario(R"({"links": [{"capacity": "x", "outage_prob": 0.1}],
                        "messages": [{"size": 1, "worth": 1}]})"),
      InputError);
  EXPECT_THROW(
      ParseScenario(R"({"links": [{"capacity": 1, "outage_prob": 1.5}],
                        "messages": [{"size": 1, "worth": 1}]})"),
      InputError);
  try {
    ParseScenario("{\n  \"links\": [\n  oops\n]}");
    FAIL() << "expected a parse error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(IoTest, CodeLibraryAndRankRoundTrip) {
  const CodeLibrary lib = Build17CodeLibrary();
  const CodeLibrary back = CodeLibraryFromJson(CodeLibraryToJson(lib));
  ASSERT_EQ(back.size(), lib.size());
  for (int k = 0; k < lib.size(); ++k) EXPECT_EQ(back.entries[k], lib.entries[k]);
  EXPECT_THROW(CodeLibraryFromJson(Json::parse(R"({"field": 2, "codes": [1]})")),
               InputError);

  const RankFunction rf = MatroidOfCode(ParseCode("A,B,A+B", FieldOrder(2))).rank;
  EXPECT_EQ(RankFunctionFromJson(RankFunctionToJson(rf)), rf);
}

TEST(IoTest, TwelveDigits) {
  EXPECT_EQ(Format12(0.994), "0.994");
  EXPECT_EQ(Format12(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(Round12(0.1 + 0.2), 0.3);
}

TEST_F(CliTest, EvalCode) {
  const std::string s = Write("s.json", kThreeLinksOneMessage);
  const Result r = RunCli({"eval-code", "--scenario", s, "--code", "A,A,A"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "0.994\n");

  const Result b =
      RunCli({"eval-code", "--scenario", s, "--code", "A,-,-", "--breakdown"});
  EXPECT_EQ(b.code, 0);
  std::istringstream lines(b.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "0.9");
  std::getline(lines, line);
  EXPECT_EQ(line[0], '#');
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 8);
  EXPECT_NE(b.out.find("7\t{1,2,3}\t0.504\t1\t{A}"), std::string::npos) << b.out;
}

TEST_F(CliTest, Optimize) {
  const std::string s = Write("s.json", kThreeLinksTwoMessages);
  const Result r = RunCli({"optimize", "--scenario", s});
  EXPECT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["objective"].get<double>(), 1.8);
  EXPECT_EQ(j["status"], "optimal");
  EXPECT_EQ(j["used"][0]["code"], "A,-,-");

  const std::string lib = Write("lib.json", R"({"field": 2, "codes": ["A,B,A+B"]})");
  const Result custom = RunCli({"optimize", "--scenario", s, "--codes", lib});
  EXPECT_EQ(custom.code, 0) << custom.err;
  EXPECT_EQ(Json::parse(custom.out)["objective"].get<double>(), 0.0);
}

TEST_F(CliTest, CheckSystematic) {
  const Result r = RunCli(
      {"check-systematic", "--code", "A,B,A+B,A+C,B+2C", "--field", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "false\nnever sent alone: C\nmatroid criterion: false\n");
  const Result t = RunCli({"check-systematic", "--code", "A,B,A+B"});
  EXPECT_EQ(t.out, "true\nmatroid criterion: true\n");
}

TEST_F(CliTest, EnumMatroids) {
  const Result r = RunCli({"enum-matroids", "-m", "1", "-n", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
  const RankFunction rf = RankFunctionFromJson(Json::parse(r.out));
  EXPECT_TRUE(ValidateRank(rf).ok());

  const std::string path = (dir_ / "out.jsonl").string();
  const Result f =
      RunCli({"enum-matroids", "-m", "2", "-n", "2", "--dedup", "--out", path});
  EXPECT_EQ(f.code, 0);
  EXPECT_TRUE(f.out.empty());
  EXPECT_NE(f.err.find("enumerated"), std::string::npos);
}

TEST_F(CliTest, ExperimentsAreDeterministic) {
  const std::vector<std::string> cov = {"coverage", "--trials", "20", "--seed", "3"};
  const Result a = RunCli(cov);
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(RunCli(cov).out, a.out);
  const Json j = Json::parse(a.out);
  EXPECT_EQ(j["config"]["seed"], 3);

  const std::vector<std::string> conj = {"conjecture", "-m", "2", "-n", "3",
                                         "--trials", "20", "--seed", "4"};
  const Result c = RunCli(conj);
  EXPECT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(RunCli(conj).out, c.out);
  EXPECT_EQ(Json::parse(c.out)["counterexample_count"], 0);

  const std::vector<std::string> mc = {"mc-validate", "--samples", "1000",
                                       "--seed", "5"};
  const Result m = RunCli(mc);
  EXPECT_EQ(m.code, 0) << m.err;
  EXPECT_EQ(RunCli(mc).out, m.out);
  EXPECT_EQ(Json::parse(m.out)["pairs"].size(), 10u);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(RunCli({}).code, 1);
  EXPECT_EQ(RunCli({"no-such-command"}).code, 1);
  EXPECT_EQ(RunCli({"eval-code", "--code"}).code, 1);
  EXPECT_EQ(RunCli({"--help"}).code, 0);

  const std::string bad = Write("bad.json", "{\n\"links\": [\n,]}");
  const Result r = RunCli({"eval-code", "--scenario", bad, "--code", "A"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line"), std::string::npos) << r.err;

  const std::string s = Write("s.json", kThreeLinksOneMessage);
  EXPECT_EQ(RunCli({"eval-code", "--scenario", s, "--code", "A,B"}).code, 2);
  EXPECT_EQ(RunCli({"eval-code", "--scenario", s, "--code", "A,,A"}).code, 2);
  EXPECT_EQ(RunCli({"eval-code", "--scenario", (dir_ / "missing.json").string(),
                    "--code", "A"})
                .code,
            2);
  EXPECT_EQ(RunCli({"check-systematic", "--code", "A", "--field", "4"}).code, 2);
}

}  // namespace
}  // namespace linkcode
