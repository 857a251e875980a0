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

#include "dglab/fixtures.hpp"

#include "dglab/errors.hpp"
#include "dglab/io.hpp"

namespace dglab::fixtures {
namespace {

ChainTerm term(std::size_t from, std::size_t to, double c, std::int64_t num,
               std::int64_t den) {
  return ChainTerm{from, to, c, Rational(num, den)};
}

}  // namespace

LeadingTermChain six_cycle_chain() {
  LeadingTermChain c;
  c.states = {"1", "2", "3", "4"};
  c.denominator = 3;
  c.terms = {
      term(0, 0, 0.5, 0, 1),       term(0, 1, 1.0 / 6, 0, 1),
      term(0, 2, 1.0 / 6, 0, 1),   term(0, 3, 1.0 / 6, 0, 1),
      term(1, 1, 1.0, 0, 1),       term(1, 2, 5.0, 1, 3),
      term(1, 3, 1.0, 2, 3),       term(2, 1, 5.0, 1, 3),
      term(2, 2, 1.0, 0, 1),       term(2, 3, 1.0, 2, 3),
      term(3, 0, 1.0, 2, 3),       term(3, 3, 1.0, 0, 1),
  };
  return c;
}

LeadingTermChain five_state_chain() {
  LeadingTermChain c;
  c.states = {"1", "2", "3", "4", "5"};
  c.denominator = 4;
  c.terms = {
      term(0, 0, 1.0, 0, 1), term(0, 1, 1.0, 1, 4), term(0, 3, 1.0, 3, 4),
      term(0, 4, 1.0, 3, 4), term(1, 0, 1.0, 1, 4), term(1, 1, 1.0, 0, 1),
      term(2, 2, 1.0, 0, 1), term(2, 3, 1.0, 1, 2), term(2, 4, 1.0, 1, 1),
      term(3, 2, 1.0, 1, 2), term(3, 3, 1.0, 0, 1), term(4, 2, 1.0, 5, 4),
      term(4, 4, 1.0, 0, 1),
  };
  return c;
}

LeadingTermChain periodic_chain() {
  LeadingTermChain c;
  c.states = {"1", "2", "3"};
  c.denominator = 2;
  c.terms = {term(0, 1, 1.0, 0, 1), term(0, 2, 1.0, 1, 2),
             term(1, 0, 1.0, 0, 1), term(2, 2, 1.0, 0, 1)};
  return c;
}

LeadingTermChain kohlberg_chain() {
  LeadingTermChain c;
  c.states = {"1*", "k", "l", "-1*"};
  c.denominator = 2;
  c.terms = {
      term(0, 0, 1.0, 0, 1), term(1, 0, 1.0, 1, 1), term(1, 1, 1.0, 0, 1),
      term(1, 2, 2.0, 1, 2), term(2, 1, 2.0, 1, 2), term(2, 2, 1.0, 0, 1),
      term(2, 3, 1.0, 1, 1), term(3, 3, 1.0, 0, 1),
  };
  return c;
}

LeadingTermChain self_loop_chain(std::size_t n) {
  LeadingTermChain c;
  c.denominator = 1;
  for (std::size_t k = 0; k < n; ++k) {
    c.states.push_back(std::to_string(k + 1));
    c.terms.push_back(term(k, k, 1.0, 0, 1));
  }
  return c;
}

GameSpec kohlberg_game() {
  GameSpec g({"1*", "k", "l", "-1*"}, {"T", "B"}, {"L", "R"});
  const std::size_t pos = 0, k = 1, l = 2, neg = 3;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      g.g(pos, i, j) = 1.0;
      g.q(pos, i, j, pos) = 1.0;
      g.g(neg, i, j) = -1.0;
      g.q(neg, i, j, neg) = 1.0;
      g.g(k, i, j) = 1.0;
      g.g(l, i, j) = -1.0;
    }
  }
  // k: TL stays, TR and BL move to l, BR absorbs in 1*.
  g.q(k, 0, 0, k) = 1.0;
  g.q(k, 0, 1, l) = 1.0;
  g.q(k, 1, 0, l) = 1.0;
  g.q(k, 1, 1, pos) = 1.0;
  // l mirrors k and absorbs in -1*.
  g.q(l, 0, 0, l) = 1.0;
  g.q(l, 0, 1, k) = 1.0;
  g.q(l, 1, 0, k) = 1.0;
  g.q(l, 1, 1, neg) = 1.0;
  return g;
}

GameSpec big_match_game() {
  GameSpec g({"k", "0*", "1*"}, {"T", "B"}, {"L", "R"});
  const std::size_t k = 0, zero = 1, one = 2;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      g.q(zero, i, j, zero) = 1.0;
      g.q(one, i, j, one) = 1.0;
      g.g(one, i, j) = 1.0;
    }
  }
  g.g(k, 0, 0) = 1.0;  // T,L -> 1*
  g.q(k, 0, 0, one) = 1.0;
  g.g(k, 0, 1) = 0.0;  // T,R -> 0*
  g.q(k, 0, 1, zero) = 1.0;
  g.g(k, 1, 0) = 0.0;  // B,L stays
  g.q(k, 1, 0, k) = 1.0;
  g.g(k, 1, 1) = 1.0;  // B,R stays
  g.q(k, 1, 1, k) = 1.0;
  return g;
}

GameSpec absorbing_game(const std::vector<double>& payoffs) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < payoffs.size(); ++k) names.push_back("a" + std::to_string(k + 1));
  GameSpec g(names, {"-"}, {"-"});
  for (std::size_t k = 0; k < payoffs.size(); ++k) {
    g.g(k, 0, 0) = payoffs[k];
    g.q(k, 0, 0, k) = 1.0;
  }
  return g;
}

std::vector<std::string> names() {
  return {"six-cycle-chain", "five-state-chain", "periodic-chain",
          "kohlberg-chain",  "kohlberg",         "bigmatch",
          "absorbing"};
}

std::string fixture_json(const std::string& name) {
  if (name == "six-cycle-chain") return chain_to_json(six_cycle_chain());
  if (name == "five-state-chain") return chain_to_json(five_state_chain());
  if (name == "periodic-chain") return chain_to_json(periodic_chain());
  if (name == "kohlberg-chain") return chain_to_json(kohlberg_chain());
  if (name == "kohlberg") return game_to_json(kohlberg_game());
  if (name == "bigmatch") return game_to_json(big_match_game());
  if (name == "absorbing") return game_to_json(absorbing_game({1.0, -0.5, 0.25}));
  throw ValidationError({"unknown example '" + name + "'"});
}

}  // namespace dglab::fixtures
