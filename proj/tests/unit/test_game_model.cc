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
#include <random>

#include "doctest.h"
#include "dglab/errors.hpp"
#include "dglab/fixtures.hpp"
#include "dglab/game_model.hpp"
#include "random_instances.hpp"

using namespace dglab;

namespace {
constexpr std::size_t T = 0, B = 1, L = 0, R = 1;
}

TEST_CASE("validate_game") {
  CHECK(validate_game(fixtures::big_match_game()).empty());
  CHECK(validate_game(fixtures::kohlberg_game()).empty());

  GameSpec g = fixtures::big_match_game();
  g.q(0, 1, 0, 0) = 0.9;
  auto v = validate_game(g);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("(0,1,0)") != std::string::npos);

  GameSpec empty({"s"}, {}, {"b"});
  auto w = validate_game(empty);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == "actions1 empty");

  GameSpec bad = fixtures::absorbing_game({1.0, 2.0});
  bad.g(1, 0, 0) = std::nan("");
  CHECK(validate_game(bad).size() == 1);
}

TEST_CASE("validate_profile") {
  GameSpec g = fixtures::big_match_game();
  StationaryProfile p;
  for (int k = 0; k < 3; ++k) {
    p.x1.push_back(Vector::Constant(2, 0.5));
    p.x2.push_back(Vector::Constant(2, 0.5));
  }
  CHECK(validate_profile(g, p).empty());
  p.x1[1](0) = 0.7;
  CHECK(validate_profile(g, p).size() == 1);
}

TEST_CASE("Shapley operator") {
  GameSpec abs = fixtures::absorbing_game({0.3, -2.0});
  Vector v(2);
  v << 0.3, -2.0;
  Vector out = shapley_operator(abs, 0.1, v);
  CHECK(out(0) == doctest::Approx(0.3));
  CHECK(out(1) == doctest::Approx(-2.0));

  GameSpec bm = fixtures::big_match_game();
  Vector w(3);
  w << 0.5, 0.0, 1.0;
  for (double lambda : {0.5, 0.1, 1e-4}) {
    CHECK(shapley_operator(bm, lambda, w)(0) == doctest::Approx(0.5).epsilon(1e-12));
  }

  // lambda = 1 reduces to the stage game.
  std::mt19937_64 rng(31);
  GameSpec r = testing::random_game(rng, 2, 3, 2, 0, false);
  Vector one = shapley_operator(r, 1.0, Vector::Zero(2));
  for (std::size_t k = 0; k < 2; ++k) {
    Matrix stage(3, 2);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 2; ++j) stage(i, j) = r.g(k, i, j);
    CHECK(one(k) == doctest::Approx(solve_matrix_game(stage).value).epsilon(1e-12));
  }
}

TEST_CASE("Shapley contraction") {
  std::mt19937_64 rng(32);
  for (int n = 0; n < 30; ++n) {
    GameSpec g = testing::random_game(rng, 3, 2, 3, 1, n % 2 == 0);
    double lambda = testing::uniform(rng, 0.01, 1.0);
    Vector v = testing::random_matrix(rng, 3, 1).col(0) * 4.0;
    Vector w = testing::random_matrix(rng, 3, 1).col(0) * 4.0;
    double lhs = (shapley_operator(g, lambda, v) - shapley_operator(g, lambda, w))
                     .cwiseAbs().maxCoeff();
    CHECK(lhs <= (1.0 - lambda) * (v - w).cwiseAbs().maxCoeff() + 2e-9);
  }
}

TEST_CASE("Big Match discounted value and strategy") {
  GameSpec g = fixtures::big_match_game();
  for (double lambda : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
    DiscountedSolution s = solve_discounted(g, lambda);
    CHECK(std::abs(s.values(0) - 0.5) <= 1e-9);
    CHECK(std::abs(s.profile.x1[0](T) - lambda / (1.0 + lambda)) <= 1e-6);
    CHECK(s.residual <= 1e-10);
  }
}

TEST_CASE("absorbing game solves exactly") {
  GameSpec g = fixtures::absorbing_game({1.5, -0.25, 0.0});
  DiscountedSolution s = solve_discounted(g, 0.3);
  CHECK(s.values(0) == 1.5);
  CHECK(s.values(1) == -0.25);
  CHECK(s.values(2) == 0.0);
}

TEST_CASE("Kohlberg value at small lambda") {
  DiscountedSolution s = solve_discounted(fixtures::kohlberg_game(), 1e-6);
  CHECK(std::abs(s.values(0) - 1.0) <= 0.05);
  CHECK(std::abs(s.values(1)) <= 0.05);
  CHECK(std::abs(s.values(2)) <= 0.05);
  CHECK(std::abs(s.values(3) + 1.0) <= 0.05);
  // k and l are mirror images.
  CHECK(s.values(1) == doctest::Approx(-s.values(2)).epsilon(1e-9));
}

TEST_CASE("solutions are bounded and optimal") {
  std::mt19937_64 rng(33);
  for (int n = 0; n < 20; ++n) {
    GameSpec g = testing::random_game(rng, 4, 2, 3, 1, n % 3 == 0);
    const double lambda = testing::uniform(rng, 0.01, 0.5);
    DiscountedSolution s = solve_discounted(g, lambda, 1e-11);
    CHECK(s.values.cwiseAbs().maxCoeff() <= g.payoff_norm() + 1e-12);
    CHECK((shapley_operator(g, lambda, s.values) - s.values).cwiseAbs().maxCoeff() <= 1e-10);
    // The returned profile guarantees the value: its evaluation equals v.
    CHECK((evaluate_profile(g, s.profile, lambda) - s.values).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("iteration cap") {
  GameSpec g = fixtures::kohlberg_game();
  CHECK(default_iteration_cap(g, 0.5, 1e-10) ==
        static_cast<std::size_t>(10 * std::ceil(std::log(1e-10 / 2.0) / std::log(0.5))));
  CHECK_THROWS_AS(solve_discounted(g, 1e-3, 1e-10, 1), NumericError);
}

TEST_CASE("value_curve") {
  GameSpec bm = fixtures::big_match_game();
  auto grid = geometric_grid(0.1, 0.1, 6);
  CHECK(grid.back() == doctest::Approx(1e-6));
  auto sols = value_curve(bm, grid);
  REQUIRE(sols.size() == 6);
  for (const auto& s : sols) CHECK(std::abs(s.values(0) - 0.5) <= 1e-9);

  auto single = value_curve(bm, {0.2});
  CHECK((single[0].values - solve_discounted(bm, 0.2).values).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(value_curve(bm, {0.1, 0.2}), ValidationError);

  // x1(k,B) ~ sqrt(lambda) in Kohlberg.
  GameSpec kg = fixtures::kohlberg_game();
  auto ks = value_curve(kg, {1e-4, 1e-6});
  double slope = std::log(ks[0].profile.x1[1](B) / ks[1].profile.x1[1](B)) / std::log(100.0);
  CHECK(slope == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("induced chain") {
  GameSpec bm = fixtures::big_match_game();
  StationaryProfile u;
  for (int k = 0; k < 3; ++k) {
    u.x1.push_back(Vector::Constant(2, 0.5));
    u.x2.push_back(Vector::Constant(2, 0.5));
  }
  InducedChain c = induced_chain(bm, u);
  CHECK(c.q(0, 0) == doctest::Approx(0.5));
  CHECK(c.q(0, 1) == doctest::Approx(0.25));
  CHECK(c.q(0, 2) == doctest::Approx(0.25));
  CHECK(c.g(0) == doctest::Approx(0.5));

  // Pure profile in a deterministic game: 0/1 rows.
  std::mt19937_64 rng(34);
  GameSpec d = testing::random_game(rng, 4, 2, 2, 0, true);
  StationaryProfile pure;
  for (int k = 0; k < 4; ++k) {
    pure.x1.push_back(Vector::Unit(2, k % 2));
    pure.x2.push_back(Vector::Unit(2, (k / 2) % 2));
  }
  Matrix q = induced_chain(d, pure).q;
  for (Eigen::Index k = 0; k < 4; ++k) {
    CHECK(q.row(k).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q.row(k).maxCoeff() == 1.0);
  }

  // Kohlberg optimal play: k -> l ~ 2 sqrt(lambda), k -> 1* ~ lambda.
  const double lambda = 1e-8;
  DiscountedSolution s = solve_discounted(fixtures::kohlberg_game(), lambda);
  Matrix kq = induced_chain(fixtures::kohlberg_game(), s.profile).q;
  CHECK(kq(1, 2) / std::sqrt(lambda) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(kq(1, 0) / lambda == doctest::Approx(1.0).epsilon(1e-3));
}
