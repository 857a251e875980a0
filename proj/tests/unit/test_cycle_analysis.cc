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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "dglab/clock_payoff.hpp"
#include "dglab/cycle_analysis.hpp"
#include "dglab/errors.hpp"
#include "dglab/fixtures.hpp"
#include "random_instances.hpp"

using namespace dglab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

double max_abs(const Matrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

const CycleNode& node(const CycleForest& f, std::vector<std::size_t> members) {
  for (const CycleNode& n : f.nodes) {
    if (n.members == members) return n;
  }
  FAIL("cycle not found");
  return f.nodes.front();
}

bool nested_or_disjoint(const CycleNode& a, const CycleNode& b) {
  std::vector<std::size_t> both;
  std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(),
                        b.members.end(), std::back_inserter(both));
  return both.empty() || both.size() == a.members.size() || both.size() == b.members.size();
}

bool multiple_of(const Rational& r, std::int64_t n) {
  return r.is_infinite() || n % r.den() == 0;
}

}  // namespace

TEST_CASE("validate_chain") {
  CHECK(validate_chain(fixtures::six_cycle_chain()).empty());

  LeadingTermChain c = fixtures::six_cycle_chain();
  c.terms.push_back(ChainTerm{3, 1, 1.0, Rational(1, 5)});
  CHECK(validate_chain(c).size() == 1);

  LeadingTermChain e = fixtures::self_loop_chain(3);
  e.terms.erase(e.terms.begin() + 1);
  auto v = validate_chain(e);
  REQUIRE(v.size() == 1);
  CHECK_THROWS_AS(require_valid_chain(e), ValidationError);
}

TEST_CASE("six-cycle chain table") {
  CycleForest f = build_cycle_tree(fixtures::six_cycle_chain());
  CHECK(f.nodes.size() == 6);
  const double third = 1.0 / 3.0;

  const CycleNode& one = node(f, {0});
  CHECK(one.exit_height == Rational(0));
  CHECK(one.exit_rate == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(max_abs(*one.exit_distribution - vec({0, third, third, third})) <= 1e-12);

  for (std::size_t s : {1, 2}) {
    const CycleNode& n = node(f, {s});
    CHECK(n.exit_height == Rational(1, 3));
    CHECK(n.exit_rate == doctest::Approx(5.0));
  }
  CHECK(max_abs(*node(f, {1}).exit_distribution - vec({0, 0, 1, 0})) <= 1e-12);
  CHECK(node(f, {3}).exit_height == Rational(2, 3));

  const CycleNode& pair = node(f, {1, 2});
  CHECK(pair.exit_height == Rational(2, 3));
  CHECK(pair.exit_rate == doctest::Approx(1.0));
  CHECK(max_abs(*pair.exit_distribution - vec({0, 0, 0, 1})) <= 1e-12);
  CHECK(*pair.mixing_height == Rational(1, 3));
  CHECK(max_abs(*pair.mixing_distribution - vec({0, 0.5, 0.5, 0})) <= 1e-12);

  const CycleNode& all = node(f, {0, 1, 2, 3});
  CHECK(all.exit_height.is_infinite());
  CHECK(*all.mixing_height == Rational(2, 3));
  CHECK(max_abs(*all.mixing_distribution - vec({0, 0.2, 0.2, 0.6})) <= 1e-12);
}

TEST_CASE("self-loop chain") {
  CycleForest f = build_cycle_tree(fixtures::self_loop_chain(3));
  CHECK(f.nodes.size() == 3);
  for (const CycleNode& n : f.nodes) {
    CHECK(n.singleton());
    CHECK(n.exit_height.is_infinite());
  }
  CHECK(instantiate(fixtures::self_loop_chain(3), 0.4) == Matrix::Identity(3, 3));
  LimitDecomposition d = decompose(fixtures::self_loop_chain(3));
  CHECK(d.transient.empty());
  CHECK(d.num_relevant() == 3);
  for (CycleClass c : d.classes) CHECK(c == CycleClass::kAbsorbing);
  CHECK(max_abs(d.generator) == 0.0);
  CHECK(max_abs(limit_occupation(d) - d.entrance_law * d.mixing_matrix) == 0.0);
}

TEST_CASE("Kohlberg chain") {
  LimitDecomposition d = decompose(fixtures::kohlberg_chain());
  const CycleNode& kl = node(d.tree, {1, 2});
  CHECK(*kl.mixing_height == Rational(1, 2));
  CHECK(kl.exit_height == Rational(1));
  CHECK(kl.exit_rate == doctest::Approx(1.0));
  CHECK(max_abs(*kl.exit_distribution - vec({0.5, 0, 0, 0.5})) <= 1e-12);
  CHECK(max_abs(*kl.mixing_distribution - vec({0, 0.5, 0.5, 0})) <= 1e-12);

  CHECK(d.transient.empty());
  REQUIRE(d.num_relevant() == 3);
  CHECK(d.classes[0] == CycleClass::kAbsorbing);
  CHECK(d.classes[1] == CycleClass::kRecurrent);
  CHECK(d.classes[2] == CycleClass::kAbsorbing);

  Matrix phi(4, 3);
  phi << 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1;
  CHECK(max_abs(d.entrance_law - phi) <= 1e-12);
  Matrix a(3, 3);
  a << 0, 0, 0, 0.5, -1, 0.5, 0, 0, 0;
  CHECK(max_abs(d.generator - a) <= 1e-12);

  for (double t : {0.0, 0.25, 0.5, 0.75}) {
    Matrix pi = position_matrix(d, t).matrix;
    Vector row = vec({t / 2, (1 - t) / 2, (1 - t) / 2, t / 2});
    CHECK(max_abs(pi.row(1).transpose() - row) <= 1e-12);
    CHECK(max_abs(pi.row(2).transpose() - row) <= 1e-12);
  }
  Matrix big_pi = limit_occupation(d);
  CHECK(max_abs(big_pi.row(1).transpose() - vec({0.25, 0.25, 0.25, 0.25})) <= 1e-12);
  CHECK(max_abs(limit_occupation_quadrature(d) - big_pi) <= 1e-8);
}

TEST_CASE("five-state chain classification") {
  const LeadingTermChain chain = fixtures::five_state_chain();
  LimitDecomposition d = decompose(chain);
  CHECK(d.threshold == Rational(7, 8));
  CHECK(d.transient == std::vector<std::size_t>{0, 1});
  REQUIRE(d.num_relevant() == 2);
  CHECK(d.tree.nodes[d.relevant[0]].members == std::vector<std::size_t>{2, 3});
  CHECK(d.classes[0] == CycleClass::kRecurrent);
  CHECK(d.tree.nodes[d.relevant[1]].members == std::vector<std::size_t>{4});
  CHECK(d.classes[1] == CycleClass::kAbsorbing);
  CHECK(node(d.tree, {0, 1}).exit_height == Rational(3, 4));
  CHECK(node(d.tree, {2, 3}).exit_height == Rational(1));
  CHECK(node(d.tree, {4}).exit_height == Rational(5, 4));

  // Entrance law from the transient states against hitting probabilities.
  NumericOracle oracle(chain, 1e-8);
  for (std::size_t s : {0, 1}) {
    Vector hit = oracle.exit_distribution({0, 1}, s);
    CHECK(std::abs(d.entrance_law(s, 0) - (hit(2) + hit(3))) <= 1e-3);
    CHECK(std::abs(d.entrance_law(s, 1) - hit(4)) <= 1e-3);
  }
  CHECK(max_abs(d.entrance_law.row(0) - d.entrance_law.row(1)) <= 1e-12);
}

TEST_CASE("generator identities") {
  std::mt19937_64 rng(61);
  for (int n = 0; n < 30; ++n) {
    LeadingTermChain c = testing::random_chain(rng, 4 + testing::pick(rng, 3), 2 + testing::pick(rng, 3));
    LimitDecomposition d = decompose(c);
    const Eigen::Index L = static_cast<Eigen::Index>(d.num_relevant());
    CHECK(d.generator.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((d.entrance_law.rowwise().sum() - Vector::Ones(d.entrance_law.rows())).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((d.mixing_matrix.rowwise().sum() - Vector::Ones(L)).cwiseAbs().maxCoeff() <= 1e-12);
    for (Eigen::Index l = 0; l < L; ++l) {
      const CycleNode& cyc = d.tree.nodes[d.relevant[static_cast<std::size_t>(l)]];
      if (d.classes[static_cast<std::size_t>(l)] == CycleClass::kAbsorbing) {
        CHECK(d.generator.row(l).cwiseAbs().maxCoeff() == 0.0);
        continue;
      }
      for (Eigen::Index m = 0; m < L; ++m) {
        if (m != l) CHECK(d.generator(l, m) >= 0.0);
      }
      // Off-diagonal mass r (1 - sum_k p(k) Phi(k, l)).
      double back = cyc.exit_distribution->dot(d.entrance_law.col(l));
      CHECK(-d.generator(l, l) == doctest::Approx(cyc.exit_rate * (1.0 - back)).epsilon(1e-12));
    }
  }
}

TEST_CASE("tree structure and heights") {
  std::mt19937_64 rng(62);
  for (int n = 0; n < 40; ++n) {
    const std::int64_t den = 2 + static_cast<std::int64_t>(testing::pick(rng, 3));
    LeadingTermChain c = testing::random_chain(rng, 4 + testing::pick(rng, 3), den);
    CycleForest f = build_cycle_tree(c);
    for (std::size_t s = 0; s < c.num_states(); ++s) CHECK(f.nodes[s].members == std::vector<std::size_t>{s});
    for (std::size_t i = 0; i < f.nodes.size(); ++i) {
      const CycleNode& a = f.nodes[i];
      for (std::size_t j = i + 1; j < f.nodes.size(); ++j) CHECK(nested_or_disjoint(a, f.nodes[j]));
      CHECK(multiple_of(a.exit_height, den));
      if (a.parent) CHECK(*a.parent > i);
      if (a.exit_distribution) {
        for (std::size_t m : a.members) CHECK((*a.exit_distribution)(static_cast<Eigen::Index>(m)) == 0.0);
        CHECK(a.exit_distribution->sum() == doctest::Approx(1.0));
      }
      if (a.singleton()) continue;
      CHECK(a.exit_height > Rational(0));
      CHECK(*a.mixing_height < a.exit_height);
      CHECK(multiple_of(*a.mixing_height, den));
      double inside = 0.0;
      for (std::size_t m : a.members) inside += (*a.mixing_distribution)(static_cast<Eigen::Index>(m));
      CHECK(inside == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("periodic chain averages the phases") {
  CycleForest f = build_cycle_tree(fixtures::periodic_chain());
  const CycleNode& c = node(f, {0, 1});
  CHECK(c.period == 2);
  CHECK(*c.mixing_height == Rational(0));
  CHECK(max_abs(*c.mixing_distribution - vec({0.5, 0.5, 0})) <= 1e-12);
}

TEST_CASE("instantiate") {
  Matrix q = instantiate(fixtures::six_cycle_chain(), 1e-6);
  CHECK(max_abs(q.row(3).transpose() - vec({1e-4, 0, 0, 1 - 1e-4})) <= 1e-15);
  CHECK((q.rowwise().sum() - Vector::Ones(4)).cwiseAbs().maxCoeff() <= 1e-15);

  Matrix k = instantiate(fixtures::kohlberg_chain(), 1e-8);
  CHECK(k(1, 0) == doctest::Approx(1e-8).epsilon(1e-12));
  CHECK(k(1, 2) == doctest::Approx(2e-4).epsilon(1e-12));
  CHECK(k(1, 1) == doctest::Approx(1 - 2e-4 - 1e-8).epsilon(1e-15));
  CHECK(k(1, 3) == 0.0);

  LeadingTermChain heavy;
  heavy.states = {"a", "b"};
  heavy.denominator = 1;
  heavy.terms = {ChainTerm{0, 1, 5.0, Rational(1)}, ChainTerm{1, 1, 1.0, Rational(0)}};
  CHECK_THROWS_AS(instantiate(heavy, 0.5), NumericError);
}

TEST_CASE("numeric oracle") {
  const LeadingTermChain chain = fixtures::six_cycle_chain();
  const double lambda = 1e-8;
  NumericOracle o(chain, lambda);
  CHECK(max_abs(o.exit_distribution({1, 2}, 1) - vec({0, 0, 0, 1})) <= 1e-3);
  // State 4 has a single exit.
  CHECK(max_abs(o.exit_distribution({3}, 3) - vec({1, 0, 0, 0})) <= 1e-15);
  auto m = static_cast<std::uint64_t>(std::floor(std::pow(lambda, -2.0 / 3.0)));
  CHECK(std::abs(o.survival({1, 2}, 1, m) - std::exp(-1.0)) <= 2e-2);
  // Survival past 1e16 stages stays a probability.
  NumericOracle deep(fixtures::kohlberg_chain(), 1e-8);
  auto big = static_cast<std::uint64_t>(2e8);
  CHECK(std::abs(deep.survival({1, 2}, 1, big) - std::exp(-2.0)) <= 2e-2);
  CHECK(deep.discounted_occupation(1).sum() == doctest::Approx(1.0));
}

TEST_CASE("position matrices against the stage law") {
  // Periodic chain: averaging over two stages removes the swap phase.
  std::mt19937_64 rng(63);
  const double lambda = 1e-7;
  for (int n = 0; n < 10; ++n) {
    LeadingTermChain c = testing::random_chain(rng, 4 + testing::pick(rng, 2), 2);
    LimitDecomposition d = decompose(c);
    NumericOracle o(c, lambda);
    Matrix pi = position_matrix(d, 0.5).matrix;
    Matrix stage = o.stage_distribution(varphi(lambda, 0.5), 12);
    CHECK(max_abs(pi - stage) <= 1e-2);
    // Entrance-law consistency: rows are Phi-mixtures of cycle rows.
    for (Eigen::Index k = 0; k < pi.rows(); ++k) {
      Vector mix = Vector::Zero(pi.cols());
      for (std::size_t l = 0; l < d.num_relevant(); ++l) {
        std::size_t rep = d.tree.nodes[d.relevant[l]].members.front();
        mix += d.entrance_law(k, static_cast<Eigen::Index>(l)) *
               pi.row(static_cast<Eigen::Index>(rep)).transpose();
      }
      CHECK(max_abs(mix - pi.row(k).transpose()) <= 1e-10);
    }
    CHECK(max_abs(position_matrix(d, 0.0).matrix - d.entrance_law * d.mixing_matrix) <= 1e-14);
  }
}

TEST_CASE("limit occupation against the resolvent") {
  std::mt19937_64 rng(64);
  for (int n = 0; n < 10; ++n) {
    LeadingTermChain c = testing::random_chain(rng, 4 + testing::pick(rng, 2), 2);
    LimitDecomposition d = decompose(c);
    Matrix pi = limit_occupation(d);
    CHECK((pi.rowwise().sum() - Vector::Ones(pi.rows())).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(max_abs(limit_occupation_quadrature(d) - pi) <= 1e-8);
    NumericOracle o(c, 1e-8);
    CHECK(max_abs(o.discounted_occupation() - pi) <= 1e-3);
  }
}
