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

#ifndef DGLAB_CYCLE_ANALYSIS_HPP_
#define DGLAB_CYCLE_ANALYSIS_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dglab/linalg.hpp"
#include "dglab/rational.hpp"

namespace dglab {

// Q(from, to) ~ coeff * lambda^exponent as lambda -> 0.
struct ChainTerm {
  std::size_t from = 0;
  std::size_t to = 0;
  double coeff = 0.0;
  Rational exponent{0};

  friend bool operator==(const ChainTerm&, const ChainTerm&) = default;
};

// Leading terms of a perturbed family of stochastic matrices. Pairs without
// a term are structurally zero. A missing (k,k) term does not mean the
// self-loop vanishes: the self-loop absorbs whatever order-0 mass the
// off-diagonal terms leave.
struct LeadingTermChain {
  std::vector<std::string> states;
  std::int64_t denominator = 1;
  std::vector<ChainTerm> terms;

  std::size_t num_states() const { return states.size(); }
  // Off-diagonal terms leaving `k`, in target order.
  std::vector<ChainTerm> exits(std::size_t k) const;
  // Leading (order-0) self-loop coefficient: 1 - sum of order-0 off-diagonal
  // coefficients, clamped to [0,1].
  double self_loop(std::size_t k) const;

  friend bool operator==(const LeadingTermChain&, const LeadingTermChain&) = default;
};

std::vector<std::string> validate_chain(const LeadingTermChain& chain);

// Throws ValidationError with the violation list when the chain is invalid.
void require_valid_chain(const LeadingTermChain& chain);

// Per-member entry of a cycle's graded occupation: the state's share of the
// cycle's sojourn is ~ mass * lambda^depth relative to the support of mu.
struct GradedOccupation {
  std::size_t state = 0;
  double mass = 0.0;
  Rational depth{0};
};

struct CycleNode {
  std::vector<std::size_t> members;   // sorted state indices
  std::vector<std::size_t> children;  // node indices
  std::optional<std::size_t> parent;
  Rational exit_height{0};            // may be Rational::infinity()
  // +inf when the state is left at once (order-0 exits, no order-0 self-loop);
  // NaN when undefined (no exit).
  double exit_rate = std::numeric_limits<double>::quiet_NaN();
  std::optional<Vector> exit_distribution;    // over all states, 0 on members
  std::optional<Rational> mixing_height;      // absent for singletons
  std::optional<Vector> mixing_distribution;  // absent for singletons
  std::vector<GradedOccupation> graded;
  int period = 1;
  // Mean sojourn per visit in units of lambda^{-exit_height}.
  double sojourn = std::numeric_limits<double>::quiet_NaN();

  bool singleton() const { return members.size() == 1; }
  bool contains(std::size_t state) const;
};

// Node i < num_states is the singleton {i}. Parents always have larger
// indices than their children.
struct CycleForest {
  std::size_t num_states = 0;
  std::vector<CycleNode> nodes;
  std::vector<std::size_t> roots;

  // Node indices from the leaf {state} up to its root.
  std::vector<std::size_t> path_to_root(std::size_t state) const;
};

// Hierarchy of cycles with all characteristics.
CycleForest build_cycle_tree(const LeadingTermChain& chain);

enum class CycleClass { kRecurrent, kAbsorbing };
const char* to_string(CycleClass c);

struct LimitDecomposition {
  CycleForest tree;
  std::int64_t denominator = 1;
  Rational threshold{0};                  // 1 - 1/(2N)
  std::vector<std::size_t> transient;     // states
  std::vector<std::size_t> relevant;      // node indices, ordered by first member
  std::vector<CycleClass> classes;        // per relevant cycle
  std::vector<std::optional<std::size_t>> cycle_of_state;  // relevant index
  Matrix entrance_law;                    // K x L
  Matrix generator;                       // L x L
  Matrix mixing_matrix;                   // L x K

  std::size_t num_relevant() const { return relevant.size(); }
};

// Relevant cycles, classes, transient set and mixing matrix. Entrance law
// and generator are left empty.
LimitDecomposition classify_relevant(const CycleForest& forest,
                                     std::int64_t denominator);
Matrix entrance_law(const LimitDecomposition& d, const LeadingTermChain& chain);
Matrix generator(const LimitDecomposition& d, const LeadingTermChain& chain);

// Whole pipeline: validate, build tree, classify, entrance law, generator.
LimitDecomposition decompose(const LeadingTermChain& chain);

struct PositionMatrix {
  double t = 0.0;
  Matrix matrix;  // K x K
};
// Phi exp(-ln(1-t) A) M, t in [0,1).
PositionMatrix position_matrix(const LimitDecomposition& d, double t);

// Phi (I - A)^{-1} M.
Matrix limit_occupation(const LimitDecomposition& d);
// Integral of t -> pi_t over [0,1) by Gauss-Legendre after the change of
// variables t = 1 - (1-u)^8, which smooths the endpoint behaviour at t = 1.
Matrix limit_occupation_quadrature(const LimitDecomposition& d,
                                   int points = 64);

// Q_lambda(k,k') = c lambda^e off the diagonal; the self-loop takes the
// residual. Rows whose order-0 off-diagonal mass is already 1 are rescaled
// instead. Throws NumericError naming the row when lambda is too large.
Matrix instantiate(const LeadingTermChain& chain, double lambda);

// Exact fixed-lambda answers on the instantiated chain. Computations avoid
// forming 1 - (small) wherever an absorbing-chain formulation exists.
class NumericOracle {
 public:
  NumericOracle(const LeadingTermChain& chain, double lambda);

  double lambda() const { return lambda_; }
  const Matrix& q() const { return q_; }

  // Law of the first state outside `members`, starting from `start`.
  Vector exit_distribution(const std::vector<std::size_t>& members,
                           std::size_t start) const;
  // Row `start` of lambda (I - (1-lambda) Q)^{-1}.
  Vector discounted_occupation(std::size_t start) const;
  Matrix discounted_occupation() const;
  // P(tau(C) > m): the chain started at `start` (stage 1) is still in C at
  // stage m.
  double survival(const std::vector<std::size_t>& members, std::size_t start,
                  std::uint64_t m) const;
  // Normalized expected visits to each member before leaving C.
  Vector occupation_before_exit(const std::vector<std::size_t>& members,
                                std::size_t start) const;
  // Law of the state at stage m (stage 1 is the start), averaged over
  // `window` consecutive stages m, m+1, ... to wash out periodicity.
  Matrix stage_distribution(std::uint64_t m, std::uint64_t window = 1) const;

 private:
  double lambda_;
  Matrix q_;
};

}  // namespace dglab

#endif  // DGLAB_CYCLE_ANALYSIS_HPP_
