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
#include <set>
#include <sstream>
#include <utility>

#include "dglab/cycle_analysis.hpp"
#include "dglab/errors.hpp"

namespace dglab {

std::vector<ChainTerm> LeadingTermChain::exits(std::size_t k) const {
  std::vector<ChainTerm> out;
  for (const ChainTerm& t : terms) {
    if (t.from == k && t.to != k) out.push_back(t);
  }
  std::sort(out.begin(), out.end(),
            [](const ChainTerm& a, const ChainTerm& b) { return a.to < b.to; });
  return out;
}

double LeadingTermChain::self_loop(std::size_t k) const {
  double s = 0.0;
  for (const ChainTerm& t : terms) {
    if (t.from == k && t.to != k && t.exponent == Rational(0)) s += t.coeff;
  }
  return std::clamp(1.0 - s, 0.0, 1.0);
}

std::vector<std::string> validate_chain(const LeadingTermChain& chain) {
  std::vector<std::string> out;
  const std::size_t K = chain.num_states();
  if (K == 0) out.push_back("states empty");
  if (chain.denominator <= 0) {
    out.push_back("denominator must be a positive integer");
    return out;
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<int> row_terms(K, 0);
  std::vector<double> order0(K, 0.0);
  for (const ChainTerm& t : chain.terms) {
    std::string where = "term (" + std::to_string(t.from) + "," + std::to_string(t.to) + ")";
    if (t.from >= K || t.to >= K) {
      out.push_back(where + " refers to an unknown state");
      continue;
    }
    if (!seen.insert({t.from, t.to}).second) out.push_back(where + " duplicated");
    if (!(t.coeff > 0.0) || !std::isfinite(t.coeff)) {
      out.push_back(where + " coefficient must be positive and finite");
    }
    if (t.exponent.is_infinite() || t.exponent < Rational(0)) {
      out.push_back(where + " exponent must be nonnegative");
    } else if (chain.denominator % t.exponent.den() != 0) {
      out.push_back(where + " exponent " + t.exponent.str() +
                    " is not a multiple of 1/" + std::to_string(chain.denominator));
    }
    ++row_terms[t.from];
    if (t.exponent == Rational(0)) order0[t.from] += t.coeff;
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (row_terms[k] == 0) out.push_back("row " + std::to_string(k) + " has no terms");
    if (order0[k] > 1.0 + 1e-9) {
      std::ostringstream os;
      os.precision(12);
      os << "row " << k << " order-0 coefficients sum to " << order0[k] << " > 1";
      out.push_back(os.str());
    }
  }
  return out;
}

void require_valid_chain(const LeadingTermChain& chain) {
  auto v = validate_chain(chain);
  if (!v.empty()) throw ValidationError(std::move(v));
}

Matrix instantiate(const LeadingTermChain& chain, double lambda) {
  require_valid_chain(chain);
  const std::size_t K = chain.num_states();
  Matrix q = Matrix::Zero(K, K);
  for (const ChainTerm& t : chain.terms) {
    if (t.from == t.to) continue;
    q(t.from, t.to) = t.coeff * std::pow(lambda, t.exponent.to_double());
  }
  for (std::size_t k = 0; k < K; ++k) {
    double off = q.row(k).sum();
    if (off <= 1.0) {
      q(k, k) = 1.0 - off;
      continue;
    }
    double order0 = 1.0 - chain.self_loop(k);
    if (order0 >= 1.0 - 1e-9) {
      q.row(k) /= off;  // no order-0 self-loop: only the mix is fixed
      continue;
    }
    std::ostringstream os;
    os << "instantiate: row " << k << " (" << chain.states[k]
       << ") has off-diagonal mass " << off << " > 1 at lambda=" << lambda;
    throw NumericError(os.str());
  }
  return q;
}

NumericOracle::NumericOracle(const LeadingTermChain& chain, double lambda)
    : lambda_(lambda), q_(instantiate(chain, lambda)) {}

Vector NumericOracle::exit_distribution(const std::vector<std::size_t>& members,
                                        std::size_t start) const {
  const Eigen::Index K = q_.rows();
  const Eigen::Index n = static_cast<Eigen::Index>(members.size());
  std::vector<Eigen::Index> outside;
  std::vector<bool> in(K, false);
  for (auto m : members) in[m] = true;
  for (Eigen::Index k = 0; k < K; ++k) {
    if (!in[k]) outside.push_back(k);
  }
  Matrix tt(n, n), ta(n, static_cast<Eigen::Index>(outside.size()));
  Eigen::Index s = -1;
  for (Eigen::Index a = 0; a < n; ++a) {
    if (members[a] == start) s = a;
    for (Eigen::Index b = 0; b < n; ++b) tt(a, b) = q_(members[a], members[b]);
    for (std::size_t b = 0; b < outside.size(); ++b) ta(a, b) = q_(members[a], outside[b]);
  }
  if (s < 0) throw ValidationError({"exit_distribution: start not in the cycle"});
  Matrix h = absorption_probabilities(tt, ta);
  Vector out = Vector::Zero(K);
  for (std::size_t b = 0; b < outside.size(); ++b) out(outside[b]) = h(s, b);
  return out;
}

Matrix NumericOracle::discounted_occupation() const {
  const Eigen::Index K = q_.rows();
  // Killing at rate lambda into a per-state sink: absorption in sink j is
  // the discounted occupation of j.
  Matrix tt = (1.0 - lambda_) * q_;
  Matrix ta = lambda_ * Matrix::Identity(K, K);
  return absorption_probabilities(tt, ta);
}

Vector NumericOracle::discounted_occupation(std::size_t start) const {
  return discounted_occupation().row(static_cast<Eigen::Index>(start)).transpose();
}

double NumericOracle::survival(const std::vector<std::size_t>& members,
                               std::size_t start, std::uint64_t m) const {
  const Eigen::Index K = q_.rows();
  const Eigen::Index n = static_cast<Eigen::Index>(members.size());
  std::vector<bool> in(static_cast<std::size_t>(K), false);
  for (auto k : members) in[k] = true;
  // One step: the block of Q on C and the exit mass, summed from the
  // off-diagonal entries so that exits far below 1e-16 are not lost in 1 - x.
  Matrix step(n, n);
  Vector exit = Vector::Zero(n);
  Eigen::Index s = -1;
  for (Eigen::Index a = 0; a < n; ++a) {
    if (members[a] == start) s = a;
    for (Eigen::Index c = 0; c < n; ++c) step(a, c) = q_(members[a], members[c]);
    for (Eigen::Index k = 0; k < K; ++k) {
      if (!in[k]) exit(a) += q_(members[a], k);
    }
  }
  if (s < 0) throw ValidationError({"survival: start not in the cycle"});
  if (m <= 1) return 1.0;
  // Binary powering of (P, e) with P = Q_CC^j and e = P(tau <= j); every
  // operation adds nonnegative terms.
  // A row-sum error eps in P grows like (1 + eps)^j under powering, which is
  // O(1) once j ~ 1e16, so rows of P are rescaled to 1 - e after each product.
  auto conserve = [n](Matrix& q, const Vector& gone) {
    for (Eigen::Index a = 0; a < n; ++a) {
      double sum = q.row(a).sum();
      if (sum > 0.0) q.row(a) *= std::max(0.0, 1.0 - gone(a)) / sum;
    }
  };
  conserve(step, exit);
  Matrix p = Matrix::Identity(n, n), base = step;
  Vector e = Vector::Zero(n), base_e = exit;
  for (std::uint64_t j = m - 1; j > 0; j >>= 1) {
    if (j & 1) {
      e = e + p * base_e;
      p = p * base;
      conserve(p, e);
    }
    if (j > 1) {
      base_e = base_e + base * base_e;
      base = base * base;
      conserve(base, base_e);
    }
  }
  return std::max(0.0, 1.0 - e(s));
}

Vector NumericOracle::occupation_before_exit(
    const std::vector<std::size_t>& members, std::size_t start) const {
  const Eigen::Index K = q_.rows();
  const Eigen::Index n = static_cast<Eigen::Index>(members.size());
  Eigen::Index s = -1;
  for (Eigen::Index a = 0; a < n; ++a) {
    if (members[a] == start) s = a;
  }
  if (s < 0) throw ValidationError({"occupation_before_exit: start not in the cycle"});
  // Renewal chain: every exit is redirected to the start. Its invariant law
  // is proportional to the expected visits per excursion.
  Matrix r = Matrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    double out = 0.0;
    for (Eigen::Index k = 0; k < K; ++k) {
      if (std::find(members.begin(), members.end(), static_cast<std::size_t>(k)) ==
          members.end()) {
        out += q_(members[a], k);
      }
    }
    for (Eigen::Index c = 0; c < n; ++c) r(a, c) = q_(members[a], members[c]);
    r(a, s) += out;
  }
  // Put the start first so unreachable members (if any) cannot break the
  // elimination order.
  std::vector<Eigen::Index> order{s};
  for (Eigen::Index a = 0; a < n; ++a) {
    if (a != s) order.push_back(a);
  }
  Matrix ro(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index c = 0; c < n; ++c) ro(a, c) = r(order[a], order[c]);
  }
  Vector pi_o = stationary_distribution(ro);
  Vector out = Vector::Zero(K);
  for (Eigen::Index a = 0; a < n; ++a) out(members[order[a]]) = pi_o(a);
  return out;
}

Matrix NumericOracle::stage_distribution(std::uint64_t m,
                                         std::uint64_t window) const {
  if (m < 1) m = 1;
  if (window < 1) window = 1;
  Matrix p = matrix_power(q_, m - 1);
  Matrix acc = p;
  for (std::uint64_t w = 1; w < window; ++w) {
    p = p * q_;
    acc += p;
  }
  return acc / static_cast<double>(window);
}

}  // namespace dglab
