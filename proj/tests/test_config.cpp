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

#include <string>

#include <gtest/gtest.h>

#include "divconq/config.hpp"

using namespace divconq;
using divconq::config::ConfigError;
using divconq::config::Json;

TEST(Config, MinimalSweepRoundTrips) {
  const std::string text = R"({
    "command": "sweep",
    "parameters": {"quantity": "q_simple"},
    "axes": [{"name": "s", "values": [1.0]}, {"name": "m", "values": [3.0]},
             {"name": "n", "values": [3.0]}]
  })";
  const auto cfg = config::parse_config(text);
  EXPECT_EQ(cfg.command, "sweep");
  ASSERT_EQ(cfg.axes.size(), 3u);
  EXPECT_EQ(cfg.to_json(), Json::parse(text));
  EXPECT_EQ(config::parse_config(cfg.to_json().dump()).to_json(), cfg.to_json());
}

TEST(Config, RangeAxisExpands) {
  const auto cfg = config::parse_config(
      R"({"command": "sweep", "axes": [{"name": "m", "range": [1, 30, 1]}]})");
  ASSERT_EQ(cfg.axes[0].values.size(), 30u);
  EXPECT_EQ(cfg.axes[0].values.back(), 30.0);
  const auto fine = config::expand_range(0.5, 4.0, 0.1);
  EXPECT_EQ(fine.size(), 36u);
  EXPECT_THROW(config::expand_range(1, 0, 1), DomainError);
}

TEST(Config, UnknownKeysAreErrors) {
  try {
    config::parse_config(R"({"command": "winprob", "parameters": {"gamm": 0.3}})");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("'gamm'"), std::string::npos);
  }
  EXPECT_THROW(config::parse_config(R"({"command": "winprob", "extra": 1})"), ConfigError);
  EXPECT_THROW(config::parse_config(R"({"command": "sweep", "axes": [{"name": "s", "vals": [1]}]})"),
               ConfigError);
  EXPECT_THROW(config::parse_config(R"({"command": "winprob", "output": {"fmt": "csv"}})"),
               ConfigError);
  EXPECT_THROW(config::parse_config(R"({"command": "frobnicate"})"), ConfigError);
}

TEST(Config, DomainErrors) {
  try {
    config::parse_config(R"({"command": "decide", "parameters": {"r": 0}})");
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("r > 0"), std::string::npos);
  }
  EXPECT_THROW(config::parse_config(R"({"command": "winprob", "parameters": {"p": 1.0}})"),
               DomainError);
  EXPECT_THROW(config::parse_config(R"({"command": "decide", "parameters": {"m0": 2.5}})"),
               DomainError);
  EXPECT_THROW(config::parse_config(R"({"command": "simulate", "parameters": {"seed": -1}})"),
               DomainError);
  EXPECT_THROW(
      config::parse_config(R"({"command": "winprob", "parameters": {"gamma_convention": "x"}})"),
      DomainError);
  EXPECT_THROW(config::parse_config(
                   R"({"command": "equilibrium", "parameters": {"members": [{"r": 0, "b": 1, "c": 1, "s_hat": 1}]}})"),
               DomainError);
}

TEST(Config, ParseErrorReportsPosition) {
  try {
    config::parse_config("{\n  \"command\": \"sweep\",\n  oops\n}");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Config, MissingFile) {
  try {
    config::load_config("/nonexistent/missing.json");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("config not found"), std::string::npos);
  }
}

TEST(Config, SeedAccessor) {
  const auto cfg = config::parse_config(
      R"({"command": "simulate", "parameters": {"seed": 18446744073709551615}})");
  ASSERT_TRUE(cfg.seed().has_value());
  EXPECT_EQ(*cfg.seed(), 18446744073709551615ULL);
}
