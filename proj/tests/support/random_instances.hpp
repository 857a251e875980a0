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

#ifndef DGLAB_TESTS_RANDOM_INSTANCES_HPP_
#define DGLAB_TESTS_RANDOM_INSTANCES_HPP_

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "dglab/cycle_analysis.hpp"
#include "dglab/game_model.hpp"

namespace dglab::testing {

inline std::vector<std::string> labels(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

inline double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// Payoffs in [-1,1]. The first `absorbing` states are absorbing. With
// `deterministic` every action pair moves to a single state; otherwise the
// law is a flat Dirichlet draw.
inline GameSpec random_game(std::mt19937_64& rng, std::size_t states,
                            std::size_t a1, std::size_t a2,
                            std::size_t absorbing, bool deterministic) {
  GameSpec g(labels("s", states), labels("a", a1), labels("b", a2));
  std::exponential_distribution<double> expo(1.0);
  for (std::size_t k = 0; k < states; ++k) {
    const double a = uniform(rng, -1.0, 1.0);
    for (std::size_t i = 0; i < a1; ++i) {
      for (std::size_t j = 0; j < a2; ++j) {
        if (k < absorbing) {
          g.g(k, i, j) = a;
          g.q(k, i, j, k) = 1.0;
          continue;
        }
        g.g(k, i, j) = uniform(rng, -1.0, 1.0);
        if (deterministic) {
          g.q(k, i, j, pick(rng, states)) = 1.0;
        } else {
          double s = 0.0;
          for (std::size_t to = 0; to < states; ++to) s += (g.q(k, i, j, to) = expo(rng));
          for (std::size_t to = 0; to < states; ++to) g.q(k, i, j, to) /= s;
        }
      }
    }
  }
  return g;
}

// A valid leading-term chain: each state has up to three exits with
// exponents m/n, 0 <= m <= 3n/2; order-0 exits sum to at most 0.9 unless a
// state is left at once.
inline LeadingTermChain random_chain(std::mt19937_64& rng, std::size_t states,
                                     std::int64_t n) {
  LeadingTermChain c;
  c.states = labels("", states);
  c.denominator = n;
  for (std::size_t k = 0; k < states; ++k) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < states; ++j) {
      if (j != k) others.push_back(j);
    }
    std::shuffle(others.begin(), others.end(), rng);
    const std::size_t exits = std::uniform_int_distribution<std::size_t>(0, 3)(rng) == 0
                                  ? 0
                                  : 1 + pick(rng, std::min<std::size_t>(3, others.size()));
    std::vector<ChainTerm> row;
    double order0 = 0.0;
    for (std::size_t e = 0; e < exits; ++e) {
      auto m = static_cast<std::int64_t>(pick(rng, static_cast<std::size_t>(3 * n / 2 + 1)));
      ChainTerm t{k, others[e], uniform(rng, 0.5, 2.0), Rational(m, n)};
      if (m == 0) order0 += t.coeff;
      row.push_back(t);
    }
    if (order0 > 0.0) {
      const double target = pick(rng, 6) == 0 ? 1.0 : uniform(rng, 0.2, 0.9);
      for (ChainTerm& t : row) {
        if (t.exponent == Rational(0)) t.coeff *= target / order0;
      }
    }
    if (row.empty()) row.push_back(ChainTerm{k, k, 1.0, Rational(0)});
    c.terms.insert(c.terms.end(), row.begin(), row.end());
  }
  return c;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index m, Eigen::Index n) {
  Matrix a(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = uniform(rng, -1.0, 1.0);
  }
  return a;
}

}  // namespace dglab::testing

#endif  // DGLAB_TESTS_RANDOM_INSTANCES_HPP_
