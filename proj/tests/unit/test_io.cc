// Copyright 2026 The dglab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "dglab/errors.hpp"
#include "dglab/fixtures.hpp"
#include "dglab/io.hpp"
#include "random_instances.hpp"

using namespace dglab;

namespace {

std::vector<std::string> violations_of(const std::string& text) {
  try {
    game_from_json(text);
  } catch (const ValidationError& e) {
    return e.violations();
  }
  return {};
}

}  // namespace

TEST_CASE("fixtures round-trip byte for byte") {
  for (const std::string& name : fixtures::names()) {
    CAPTURE(name);
    std::string text = fixtures::fixture_json(name);
    if (text.find("\"terms\"") != std::string::npos) {
      LeadingTermChain c = chain_from_json(text);
      CHECK(chain_to_json(c) == text);
    } else {
      GameSpec g = game_from_json(text);
      CHECK(game_to_json(g) == text);
    }
  }
  CHECK_THROWS_AS(fixtures::fixture_json("nope"), ValidationError);
}

TEST_CASE("random games round-trip exactly") {
  std::mt19937_64 rng(71);
  for (int n = 0; n < 20; ++n) {
    GameSpec g = testing::random_game(rng, 3, 2, 2, 1, n % 2 == 0);
    CHECK(game_from_json(game_to_json(g)) == g);
  }
  for (int n = 0; n < 20; ++n) {
    LeadingTermChain c = testing::random_chain(rng, 5, 3);
    CHECK(chain_from_json(chain_to_json(c)) == c);
  }
}

TEST_CASE("malformed game files name the problem") {
  CHECK_FALSE(violations_of("{not json").empty());
  CHECK_FALSE(violations_of("[]").empty());
  auto v = violations_of(R"({"states":["a"],"actions1":["x"],"actions2":["y"],
      "payoff":[[[1, 2]]],"transition":[[[[1]]]]})");
  REQUIRE_FALSE(v.empty());
  CHECK(v[0].find("payoff[0][0]") != std::string::npos);
  auto w = violations_of(R"({"states":["a"],"actions1":["x"],"actions2":["y"],
      "payoff":[[[1]]],"transition":[[[[0.9]]]]})");
  REQUIRE(w.size() == 1);
  CHECK(w[0].find("(0,0,0)") != std::string::npos);
}

TEST_CASE("chain files accept state names") {
  LeadingTermChain c = chain_from_json(R"({"states":["a","b"],"denominator":2,
      "terms":[{"from":"a","to":"b","coeff":1.5,"exp_num":1},
               {"from":1,"to":"a","coeff":1,"exp_num":0}]})");
  REQUIRE(c.terms.size() == 2);
  CHECK(c.terms[0].from == 0);
  CHECK(c.terms[0].to == 1);
  CHECK(c.terms[0].exponent == Rational(1, 2));
  CHECK(c.terms[1].from == 1);
  CHECK_THROWS_AS(chain_from_json(R"({"states":["a"],"denominator":1,
      "terms":[{"from":"zz","to":"a","coeff":1,"exp_num":0}]})"), ValidationError);
  CHECK_THROWS_AS(chain_from_json(R"({"states":["a","b"],"denominator":1,
      "terms":[{"from":0,"to":1,"coeff":1,"exp_num":0.5}]})"), ValidationError);
}

TEST_CASE("cycle table") {
  LeadingTermChain c = fixtures::six_cycle_chain();
  std::string csv = cycle_table_csv(c, decompose(c));
  CHECK(csv.rfind("# dglab ", 0) == 0);
  CHECK(csv.find("cycle,exit_height,exit_rate,exit_distribution,mixing_height,"
                 "mixing_distribution,class\n") != std::string::npos);
  CHECK(csv.find("\"{2,3}\",2/3,1,\"(0,0,0,1)\",1/3,\"(0,0.5,0.5,0)\"") != std::string::npos);
  CHECK(csv == cycle_table_csv(c, decompose(c)));
}

TEST_CASE("format_double reads back") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.5}) {
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("reports serialize with stable keys") {
  CpReport r;
  r.check = "demo";
  r.residuals = {{"b", 0.5}, {"a", std::numeric_limits<double>::infinity()}};
  r.tolerance = 0.1;
  r.inputs = {{"t_grid", {0.0, 0.5}}};
  std::string s = reports_to_json({r});
  CHECK(s.find("\"inf\"") != std::string::npos);
  CHECK(s.find("\"a\"") < s.find("\"b\""));
  CHECK(s.find("note") == std::string::npos);
  r.note = "hello";
  CHECK(reports_to_json({r}).find("\"note\": \"hello\"") != std::string::npos);
}

TEST_CASE("solution dumps") {
  GameSpec g = fixtures::big_match_game();
  auto sols = value_curve(g, {0.1, 0.01});
  std::string csv = solution_to_csv(g, sols);
  CHECK(csv.find("lambda,v[k],v[0*],v[1*]") != std::string::npos);
  std::string json = solution_to_json(g, sols);
  CHECK(json.find("\"x1\"") != std::string::npos);
  CHECK(json == solution_to_json(g, sols));
}

TEST_CASE("files") {
  CHECK_THROWS_AS(read_file("/nonexistent/dglab/file.json"), ValidationError);
}
