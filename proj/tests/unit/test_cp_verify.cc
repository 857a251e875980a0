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

#include "doctest.h"
#include "dglab/clock_payoff.hpp"
#include "dglab/cp_verify.hpp"
#include "dglab/errors.hpp"
#include "dglab/fixtures.hpp"

using namespace dglab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

std::vector<double> fine_grid() { return geometric_grid(0.1, std::sqrt(0.1), 13); }

const ChainTerm* term(const LeadingTermChain& c, std::size_t from, std::size_t to) {
  for (const ChainTerm& t : c.terms) {
    if (t.from == from && t.to == to) return &t;
  }
  return nullptr;
}

VerifiedLimit kohlberg_exact() {
  return exact_limit(fixtures::kohlberg_chain(), vec({1, 1, -1, -1}), vec({1, 0, 0, -1}));
}

}  // namespace

TEST_CASE("insufficient grids are rejected") {
  GameSpec g = fixtures::big_match_game();
  CHECK_THROWS_AS(build_profile_limit(g, geometric_grid(0.1, 0.1, 5)), ValidationError);
  CHECK_THROWS_AS(build_profile_limit(g, geometric_grid(0.1, 0.5, 12)), ValidationError);
}

TEST_CASE("Big Match limit") {
  VerifiedLimit v = build_profile_limit(fixtures::big_match_game(), fine_grid());
  const ProfileLimit& l = v.limit;
  CHECK(std::abs(l.v_star(0) - 0.5) <= 1e-6);
  CHECK(std::abs(l.v_star(1)) <= 1e-9);
  CHECK(std::abs(l.v_star(2) - 1.0) <= 1e-9);
  // Absorption from k at order lambda, split evenly by player 2.
  for (std::size_t to : {1, 2}) {
    const ChainTerm* t = term(l.fitted_chain, 0, to);
    REQUIRE(t != nullptr);
    CHECK(t->exponent == Rational(1));
    CHECK(t->coeff == doctest::Approx(0.5).epsilon(1e-3));
  }
  CHECK(v.decomposition.classes[0] == CycleClass::kRecurrent);
  CHECK(l.constant_on_cycles);
}

TEST_CASE("all-absorbing limit") {
  GameSpec g = fixtures::absorbing_game({0.5, -1.0, 2.0});
  VerifiedLimit v = build_profile_limit(g, fine_grid());
  CHECK(v.decomposition.num_relevant() == 3);
  for (CycleClass c : v.decomposition.classes) CHECK(c == CycleClass::kAbsorbing);
  CHECK((v.limit.v_star - vec({0.5, -1.0, 2.0})).cwiseAbs().maxCoeff() == 0.0);

  auto rep = verify_weak_cp(g, v.limit, 1e-5, default_t_grid(), 0.05);
  CHECK(rep.pass);
  CHECK(rep.max_residual() <= 1e-5 * g.payoff_norm());
}

TEST_CASE("Kohlberg fitted limit") {
  VerifiedLimit v = build_profile_limit(fixtures::kohlberg_game(), fine_grid());
  const ProfileLimit& l = v.limit;
  CHECK((l.v_star - vec({1, 0, 0, -1})).cwiseAbs().maxCoeff() <= 0.05);
  const ChainTerm* kl = term(l.fitted_chain, 1, 2);
  const ChainTerm* k1 = term(l.fitted_chain, 1, 0);
  REQUIRE(kl != nullptr);
  REQUIRE(k1 != nullptr);
  CHECK(kl->exponent == Rational(1, 2));
  CHECK(kl->coeff == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(k1->exponent == Rational(1));
  CHECK(k1->coeff == doctest::Approx(1.0).epsilon(1e-2));
  REQUIRE(l.strategy_fits.has_value());

  CpReport weak = verify_weak_cp(fixtures::kohlberg_game(), l, 1e-5, default_t_grid(), 0.05);
  CHECK(weak.pass);
  CHECK(check_truncated_profile(fixtures::kohlberg_game(), l, 1e-5, default_t_grid(), 0.05).pass);
  CpReport aux = aux_payoff_scan(fixtures::kohlberg_game(), l, 1, {0.5, 1.0, 2.0},
                                 {1e-3, 1e-4, 1e-5}, 0.05);
  CHECK(aux.pass);
}

TEST_CASE("Kohlberg exact identities") {
  VerifiedLimit v = kohlberg_exact();
  const auto& grid = default_t_grid();
  CHECK(check_constancy(v.limit).pass);
  CpReport inv = check_invariance(v.limit, v.decomposition, grid, 1e-9);
  CHECK(inv.pass);
  CHECK(inv.max_residual() <= 1e-12);
  CpReport cyc = check_cycle_values(v.limit, v.decomposition, 1e-9);
  CHECK(cyc.pass);
  CHECK(cyc.max_residual() <= 1e-12);
  CHECK(cyc.note.find("not recurrent") != std::string::npos);
  CpReport sh = check_limit_shapley(v.limit, v.decomposition, {0.0, 0.25, 0.5, 0.75}, 1e-9);
  CHECK(sh.pass);
  CHECK(sh.max_residual() <= 1e-10);
  CHECK(check_payoff_rate(v.limit, v.decomposition, grid, 1e-9).pass);
  CpReport mg = check_martingale(v.limit, v.decomposition, grid, 1e-10);
  CHECK(mg.pass);
  CHECK(mg.max_residual() <= 1e-10);
}

TEST_CASE("identities catch a wrong limit value") {
  VerifiedLimit v = exact_limit(fixtures::kohlberg_chain(), vec({1, 1, -1, -1}),
                                vec({1, 0.3, 0.3, -1}));
  const auto& grid = default_t_grid();
  CHECK_FALSE(check_invariance(v.limit, v.decomposition, grid, 1e-6).pass);
  CHECK_FALSE(check_cycle_values(v.limit, v.decomposition, 1e-6).pass);
  CHECK_FALSE(check_limit_shapley(v.limit, v.decomposition, grid, 1e-6).pass);
}

TEST_CASE("limit Shapley at t = 0 equals invariance at t = 0") {
  VerifiedLimit v = exact_limit(fixtures::kohlberg_chain(), vec({1, 1, -1, -1}),
                                vec({1, 0.2, -0.1, -1}));
  CpReport sh = check_limit_shapley(v.limit, v.decomposition, {0.0}, 1.0);
  CpReport inv = check_invariance(v.limit, v.decomposition, {0.0}, 1.0);
  double a = 0.0, b = 0.0;
  for (const auto& [key, val] : sh.residuals) a = std::max(a, val);
  for (const auto& [key, val] : inv.residuals) {
    if (key.rfind("pi[", 0) == 0) b = std::max(b, val);
  }
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("Big Match negative control and truncation") {
  GameSpec g = fixtures::big_match_game();
  VerifiedLimit v = build_profile_limit(g, fine_grid());
  const double lambda = 1e-5;
  DiscountedSolution s = solve_discounted(g, lambda);
  StationaryProfile one_sided = with_fixed_opponent(s.profile, 0);
  CpReport neg = verify_weak_cp(g, v.limit, one_sided, lambda, default_t_grid(), 0.05, "neg");
  CHECK_FALSE(neg.pass);
  CHECK(neg.max_residual() >= 0.1);
  auto rows = payoff_curve(g, one_sided, lambda, 0, 0.5, {0.2, 0.5, 0.8});
  for (const auto& r : rows) {
    CHECK(std::abs(r.abs_gap - std::abs(r.t * r.t / 2 - r.t / 2)) <= 0.02);
  }
  CHECK(check_truncated_profile(g, v.limit, lambda, default_t_grid(), 0.05).pass);
  CpReport aux = aux_payoff_scan(g, v.limit, 0, {1.0}, {1e-3, 1e-4, 1e-5}, 0.05);
  CHECK(aux.pass);
  CHECK(aux.max_residual() <= 1e-9);
}

TEST_CASE("designed swap example for the auxiliary payoff") {
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  for (double lambda : {1e-2, 1e-4}) {
    Vector v = vec({0.0, std::sqrt(lambda)});
    const double a = 1.0 - lambda;
    CHECK(h_payoff(swap, v, 0, 0, 1.0, lambda) ==
          doctest::Approx(a * std::sqrt(lambda) / (1.0 + a)).epsilon(1e-10));
  }
}

TEST_CASE("with_fixed_opponent") {
  DiscountedSolution s = solve_discounted(fixtures::big_match_game(), 0.1);
  StationaryProfile p = with_fixed_opponent(s.profile, 1);
  for (const auto& y : p.x2) CHECK(y == Vector::Unit(2, 1));
  CHECK(p.x1[0] == s.profile.x1[0]);
}

TEST_CASE("run_verification is ordered and repeatable") {
  GameSpec g = fixtures::kohlberg_game();
  VerifiedLimit v = build_profile_limit(g, fine_grid());
  VerifyOptions opt;
  auto a = run_verification(g, v, opt);
  auto b = run_verification(g, v, opt);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > 0) CHECK(a[i - 1].check < a[i].check);
    CHECK(a[i].check == b[i].check);
    CHECK(a[i].residuals == b[i].residuals);
    CHECK(a[i].pass);
  }
}
