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
#include <map>
#include <sstream>

#include "dglab/cycle_analysis.hpp"
#include "dglab/errors.hpp"

namespace dglab {

const char* to_string(CycleClass c) {
  return c == CycleClass::kRecurrent ? "recurrent" : "absorbing";
}

LimitDecomposition classify_relevant(const CycleForest& forest,
                                     std::int64_t denominator) {
  if (denominator <= 0) throw ValidationError({"denominator must be positive"});
  LimitDecomposition d;
  d.tree = forest;
  d.denominator = denominator;
  d.threshold = Rational(2 * denominator - 1, 2 * denominator);
  const Rational& th = d.threshold;
  const std::size_t K = forest.num_states;

  for (std::size_t id = 0; id < forest.nodes.size(); ++id) {
    const CycleNode& n = forest.nodes[id];
    bool relevant = n.singleton()
                        ? n.exit_height > th
                        : (*n.mixing_height < th && th < n.exit_height);
    if (relevant) d.relevant.push_back(id);
  }
  std::sort(d.relevant.begin(), d.relevant.end(), [&](std::size_t a, std::size_t b) {
    return forest.nodes[a].members.front() < forest.nodes[b].members.front();
  });

  d.cycle_of_state.assign(K, std::nullopt);
  d.mixing_matrix = Matrix::Zero(static_cast<Eigen::Index>(d.relevant.size()),
                                 static_cast<Eigen::Index>(K));
  for (std::size_t l = 0; l < d.relevant.size(); ++l) {
    const CycleNode& n = forest.nodes[d.relevant[l]];
    if (n.exit_height == Rational(1)) {
      d.classes.push_back(CycleClass::kRecurrent);
    } else if (n.exit_height > Rational(1)) {
      d.classes.push_back(CycleClass::kAbsorbing);
    } else {
      throw NumericError("classify_relevant: relevant cycle with exit height " +
                         n.exit_height.str() + " strictly between the threshold and 1");
    }
    for (std::size_t s : n.members) {
      if (d.cycle_of_state[s]) {
        throw NumericError("classify_relevant: relevant cycles overlap at state " +
                           std::to_string(s));
      }
      d.cycle_of_state[s] = l;
    }
    if (n.singleton()) {
      d.mixing_matrix(static_cast<Eigen::Index>(l),
                      static_cast<Eigen::Index>(n.members[0])) = 1.0;
    } else {
      d.mixing_matrix.row(static_cast<Eigen::Index>(l)) =
          n.mixing_distribution->transpose();
    }
  }
  for (std::size_t s = 0; s < K; ++s) {
    if (!d.cycle_of_state[s]) d.transient.push_back(s);
  }
  return d;
}

Matrix entrance_law(const LimitDecomposition& d, const LeadingTermChain& chain) {
  const std::size_t K = chain.num_states();
  const std::size_t L = d.relevant.size();
  const CycleForest& f = d.tree;
  Matrix phi = Matrix::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(L));
  for (std::size_t s = 0; s < K; ++s) {
    if (d.cycle_of_state[s]) phi(s, *d.cycle_of_state[s]) = 1.0;
  }
  if (d.transient.empty()) return phi;

  // Each transient state belongs to its largest sub-threshold ancestor.
  std::map<std::size_t, std::size_t> agg_slot;
  std::vector<std::size_t> aggs;
  std::vector<std::size_t> agg_of(K, 0);
  for (std::size_t s : d.transient) {
    std::size_t top = s;
    for (std::size_t id : f.path_to_root(s)) {
      if (f.nodes[id].exit_height < d.threshold) top = id;
    }
    if (!agg_slot.count(top)) {
      agg_slot[top] = aggs.size();
      aggs.push_back(top);
    }
    agg_of[s] = agg_slot[top];
  }
  const Eigen::Index n = static_cast<Eigen::Index>(aggs.size());
  Matrix tt = Matrix::Zero(n, n);
  Matrix ta = Matrix::Zero(n, static_cast<Eigen::Index>(L));
  for (Eigen::Index a = 0; a < n; ++a) {
    const CycleNode& x = f.nodes[aggs[a]];
    if (!x.exit_distribution) {
      throw NumericError("entrance_law: transient aggregate without exit");
    }
    const Vector& p = *x.exit_distribution;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      if (p(k) == 0.0) continue;
      auto s = static_cast<std::size_t>(k);
      if (d.cycle_of_state[s]) {
        ta(a, *d.cycle_of_state[s]) += p(k);
      } else {
        tt(a, agg_of[s]) += p(k);
      }
    }
  }
  Matrix h = absorption_probabilities(tt, ta);
  for (Eigen::Index a = 0; a < n; ++a) {
    if (std::abs(h.row(a).sum() - 1.0) > 1e-9) {
      throw NumericError("entrance_law: singular hitting system");
    }
  }
  for (std::size_t s : d.transient) phi.row(s) = h.row(agg_of[s]);
  return phi;
}

Matrix generator(const LimitDecomposition& d, const LeadingTermChain& chain) {
  (void)chain;
  const std::size_t L = d.relevant.size();
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(L));
  for (std::size_t l = 0; l < L; ++l) {
    if (d.classes[l] != CycleClass::kRecurrent) continue;
    const CycleNode& c = d.tree.nodes[d.relevant[l]];
    Vector to = c.exit_distribution->transpose() * d.entrance_law;
    double off = 0.0;
    for (std::size_t m = 0; m < L; ++m) {
      if (m == l) continue;
      a(l, m) = c.exit_rate * to(m);
      off += a(l, m);
    }
    a(l, l) = -off;
  }
  return a;
}

LimitDecomposition decompose(const LeadingTermChain& chain) {
  LimitDecomposition d = classify_relevant(build_cycle_tree(chain), chain.denominator);
  d.entrance_law = entrance_law(d, chain);
  d.generator = generator(d, chain);
  return d;
}

PositionMatrix position_matrix(const LimitDecomposition& d, double t) {
  if (!(t >= 0.0 && t < 1.0)) throw ValidationError({"position_matrix: t must lie in [0,1)"});
  Matrix e = expm(-std::log1p(-t) * d.generator);
  return PositionMatrix{t, d.entrance_law * e * d.mixing_matrix};
}

Matrix limit_occupation(const LimitDecomposition& d) {
  const Eigen::Index L = d.generator.rows();
  Matrix inv = lu_solve(Matrix::Identity(L, L) - d.generator, Matrix::Identity(L, L));
  return d.entrance_law * inv * d.mixing_matrix;
}

Matrix limit_occupation_quadrature(const LimitDecomposition& d, int points) {
  constexpr double kPower = 8.0;
  auto [u, w] = gauss_legendre(points, 0.0, 1.0);
  const Eigen::Index L = d.generator.rows();
  Matrix acc = Matrix::Zero(L, L);
  for (std::size_t i = 0; i < u.size(); ++i) {
    double one_minus = 1.0 - u[i];
    // t = 1 - (1-u)^8, dt = 8 (1-u)^7 du, -ln(1-t) = -8 ln(1-u).
    double jac = kPower * std::pow(one_minus, kPower - 1.0);
    acc += w[i] * jac * expm(-kPower * std::log(one_minus) * d.generator);
  }
  return d.entrance_law * acc * d.mixing_matrix;
}

}  // namespace dglab
