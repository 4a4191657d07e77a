/*
   Copyright 2026 The divconq Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "divconq/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = divconq::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string config_path(const std::string& name) {
  return std::string(DIVCONQ_CONFIG_DIR) + "/" + name;
}

}  // namespace

TEST(Cli, WinprobTie) {
  const auto r = run({"winprob", "--s", "1", "--m", "3", "--n", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "s,m,n,q\n1,3,3,0.5\n");
}

TEST(Cli, WinprobConstantP) {
  const auto r = run({"winprob", "--p", "0.6", "--m", "2", "--n", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "p,m,n,q\n0.6,2,3,0.63981042654\n");
}

TEST(Cli, WinprobRejectsZeroStrength) {
  const auto r = run({"winprob", "--s", "0", "--m", "3", "--n", "3"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("'s'"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("s > 0"), std::string::npos) << r.err;
  EXPECT_EQ(lines(r.err).size(), 1u);
}

TEST(Cli, GeneralAgreesWithDefaultAtReduction) {
  const auto plain = run({"winprob", "--s", "2.5", "--m", "3", "--n", "4"});
  const auto general = run({"winprob", "--s", "2.5", "--m", "3", "--n", "4", "--general", "--R",
                            "1", "--gamma", "0"});
  ASSERT_EQ(plain.code, 0);
  ASSERT_EQ(general.code, 0) << general.err;
  const auto q_plain = lines(plain.out)[1].substr(lines(plain.out)[1].rfind(',') + 1);
  const auto cells = lines(general.out)[1];
  // columns: s,m,n,R,gamma,q,q_chain
  std::vector<std::string> parts;
  std::stringstream ss(cells);
  for (std::string c; std::getline(ss, c, ',');) parts.push_back(c);
  ASSERT_EQ(parts.size(), 7u);
  EXPECT_EQ(parts[5], q_plain);
  EXPECT_EQ(parts[6], q_plain);
}

TEST(Cli, GeneralWithConvention) {
  const auto r = run({"winprob", "--s", "2", "--m", "3", "--n", "4", "--R", "0.5", "--gamma=-1",
                      "--gamma-convention", "appendix", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["metadata"]["gamma_convention"], "appendix");
  EXPECT_EQ(doc["metadata"]["version"], divconq::kVersion);
  EXPECT_TRUE(doc["metadata"]["seed"].is_null());
  EXPECT_NEAR(doc["rows"][0]["q"].get<double>(), doc["rows"][0]["q_chain"].get<double>(), 1e-11);
  EXPECT_EQ(doc["metadata"]["parameters"]["gamma"], -1.0);
}

TEST(Cli, NegativeValueWithSpace) {
  const auto r = run({"battle-p", "--s", "1", "--m", "3", "--n", "3", "--gamma", "-1", "--i", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out)[1], "1,3,3,1,-1,5,0.26894142137");
}

TEST(Cli, BattlePTable) {
  const auto r = run({"battle-p", "--s", "1", "--m", "3", "--n", "3", "--general", "--gamma", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 6u);
  EXPECT_EQ(l[0], "s,m,n,R,gamma,i,p");
  EXPECT_EQ(l[3], "1,3,3,1,1,3,0.5");
  EXPECT_EQ(l[5], "1,3,3,1,1,5,0.73105857863");
  const auto simple = run({"battle-p", "--s", "10", "--m", "2", "--n", "50"});
  EXPECT_EQ(lines(simple.out)[1], "10,2,50,0.714285714286");
}

TEST(Cli, SimulateIsReproducible) {
  const std::vector<std::string> args = {"simulate", "--m", "2", "--n", "3", "--p", "0.6",
                                         "--trials", "20000", "--seed", "77", "--format", "json"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto doc = nlohmann::json::parse(a.out);
  EXPECT_EQ(doc["metadata"]["seed"], 77);
  EXPECT_EQ(doc["metadata"]["generator"], divconq::kGeneratorName);
  EXPECT_EQ(doc["rows"][0]["trials"], 20000);
}

TEST(Cli, DecideFigureFive) {
  const auto r = run({"decide", "--r", "0.1", "--b", "100", "--c", "1", "--s-hat", "10", "--m0",
                      "2", "--m1", "1", "--n", "50", "--s", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  EXPECT_EQ(l[0],
            "q_m0,q_m1,delta_q,incentive,defects,status_quo_payoff,greater_unity_payoff,"
            "q_m0_actual,q_m1_actual");
  EXPECT_EQ(l[1].substr(0, 22), "0.84,0.8,-0.04,-38.033");
  EXPECT_NE(l[1].find(",true,"), std::string::npos);
}

TEST(Cli, Equilibrium) {
  const auto r = run({"equilibrium", "--m0", "3", "--m1", "1", "--n", "10", "--s", "4", "--member",
                      "0.05:5:1:4", "--member", "0.05:-1:1:4", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_FALSE(doc["metadata"]["unanimous_unity_is_nash"].get<bool>());
  ASSERT_EQ(doc["rows"].size(), 2u);
  EXPECT_FALSE(doc["rows"][0]["defects"].get<bool>());
  EXPECT_TRUE(doc["rows"][1]["defects"].get<bool>());

  const auto cfg = run({"--config", config_path("equilibrium.json")});
  ASSERT_EQ(cfg.code, 0) << cfg.err;
  EXPECT_EQ(nlohmann::json::parse(cfg.out)["rows"].size(), 3u);
}

TEST(Cli, Classify) {
  const auto r = run({"classify", "--r", "2", "--b", "-1", "--c", "1", "--s-hat", "1e6", "--m0",
                      "2", "--m1", "1", "--n", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "myopic,naive,collaborationist,defeatist,complacent\ntrue,false,true,true,false\n");
  const auto bad = run({"classify", "--r", "2", "--b", "1", "--c", "1", "--s-hat", "1", "--m0",
                        "2", "--m1", "1", "--n", "5", "--s-complacent", "10", "--s-defeatist",
                        "5"});
  EXPECT_EQ(bad.code, 1);
}

TEST(Cli, VerifyProp1) {
  const auto fail = run({"verify-prop1", "--s", "10", "--n", "50", "--m-max", "10"});
  ASSERT_EQ(fail.code, 0) << fail.err;
  EXPECT_EQ(lines(fail.out)[1].substr(0, 28), "10,50,1,0,10,false,1,0.8,0.8");
  const auto pass = run({"verify-prop1", "--s", "1e4", "--n", "10", "--m-max", "40"});
  EXPECT_NE(lines(pass.out)[1].find(",true,,,,"), std::string::npos) << pass.out;
}

TEST(Cli, CriticalAndOptimal) {
  const auto crit = run({"critical-s", "--n", "50", "--s-lo", "10", "--s-hi", "1e4", "--m-max",
                         "10", "--tolerance", "1e-3", "--format", "json"});
  ASSERT_EQ(crit.code, 0) << crit.err;
  EXPECT_GT(nlohmann::json::parse(crit.out)["rows"][0]["s_star"].get<double>(), 10.0);
  const auto bad = run({"critical-s", "--n", "50", "--s-lo", "1", "--s-hi", "5"});
  EXPECT_EQ(bad.code, 1);

  const auto opt = run({"optimal-m", "--s", "10", "--n", "50", "--m-max", "10"});
  ASSERT_EQ(opt.code, 0) << opt.err;
  EXPECT_EQ(lines(opt.out)[1], "10,50,1,0,10,2,0.84");
}

TEST(Cli, SweepFromConfigMatchesFlags) {
  const auto from_cfg = run({"sweep", "--config", config_path("fig3b.json")});
  ASSERT_EQ(from_cfg.code, 0) << from_cfg.err;
  const auto l = lines(from_cfg.out);
  ASSERT_EQ(l.size(), 121u);
  EXPECT_EQ(l[0], "m,n,s,q");
  const auto from_flags = run({"sweep", "--quantity", "q_simple", "--axis", "m=1:30:1", "--axis",
                               "n=15", "--axis", "s=0.5,1,2,4"});
  EXPECT_EQ(from_flags.out, from_cfg.out);
  EXPECT_EQ(run({"sweep", "--config", config_path("fig3b.json")}).out, from_cfg.out);
}

TEST(Cli, SweepFigureFiveRecordsNegativeDelta) {
  const auto r = run({"sweep", "--config", config_path("fig5.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["rows"].size(), 48u);
  ASSERT_TRUE(doc["metadata"].contains("notes"));
  EXPECT_EQ(doc["rows"][0]["delta_q"], -0.04);
  EXPECT_EQ(doc["metadata"]["config"]["command"], "sweep");
}

TEST(Cli, SweepWritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "divconq_cli_sweep.csv";
  const auto r = run({"sweep", "--quantity", "optimal_m", "--axis", "s=0.5,4", "--axis", "n=10",
                      "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(lines(buf.str()).size(), 3u);
  std::filesystem::remove(path);
}

TEST(Cli, ConfigErrors) {
  const auto missing = run({"sweep", "--config", "missing.json"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("config not found"), std::string::npos);

  const auto path = std::filesystem::temp_directory_path() / "divconq_bad.json";
  {
    std::ofstream(path) << R"({"command": "winprob", "parameters": {"gamm": 1}})";
  }
  const auto typo = run({"--config", path.string()});
  EXPECT_EQ(typo.code, 1);
  EXPECT_NE(typo.err.find("gamm"), std::string::npos);
  {
    std::ofstream(path) << R"({"command": "decide", "parameters": {"r": 0}})";
  }
  const auto zero_r = run({"--config", path.string()});
  EXPECT_EQ(zero_r.code, 1);
  EXPECT_NE(zero_r.err.find("r > 0"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"winprob", "--m", "3", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"winprob", "--s", "abc", "--m", "3", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"winprob", "--s", "1", "--m", "3", "--n", "3", "--r", "1"}).code, 2);
  EXPECT_EQ(run({"winprob", "--s", "1", "--m", "3", "--n", "3", "--bogus"}).code, 2);
  EXPECT_EQ(run({"decide", "--r", "1"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ProcessExitCodes) {
  const std::string cli = DIVCONQ_CLI_PATH;
  EXPECT_EQ(WEXITSTATUS(std::system((cli + " winprob --s 1 --m 3 --n 3 > /dev/null").c_str())), 0);
  EXPECT_EQ(WEXITSTATUS(std::system((cli + " sweep --config missing.json 2> /dev/null").c_str())),
            1);
  EXPECT_EQ(WEXITSTATUS(std::system((cli + " nonsense 2> /dev/null").c_str())), 2);
}
