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

#ifndef DGLAB_GAME_MODEL_HPP_
#define DGLAB_GAME_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dglab/linalg.hpp"
#include "dglab/rational.hpp"

namespace dglab {

// Finite two-player zero-sum stochastic game. Player 1 maximizes.
struct GameSpec {
  std::vector<std::string> states;
  std::vector<std::string> actions1;
  std::vector<std::string> actions2;
  // Flat storage, row-major in [k][i][j] and [k][i][j][k'].
  std::vector<double> payoff;
  std::vector<double> transition;

  GameSpec() = default;
  GameSpec(std::vector<std::string> states, std::vector<std::string> actions1,
           std::vector<std::string> actions2);

  std::size_t num_states() const { return states.size(); }
  std::size_t num_actions1() const { return actions1.size(); }
  std::size_t num_actions2() const { return actions2.size(); }

  double& g(std::size_t k, std::size_t i, std::size_t j) {
    return payoff[(k * num_actions1() + i) * num_actions2() + j];
  }
  double g(std::size_t k, std::size_t i, std::size_t j) const {
    return payoff[(k * num_actions1() + i) * num_actions2() + j];
  }
  double& q(std::size_t k, std::size_t i, std::size_t j, std::size_t to) {
    return transition[((k * num_actions1() + i) * num_actions2() + j) *
                          num_states() + to];
  }
  double q(std::size_t k, std::size_t i, std::size_t j, std::size_t to) const {
    return transition[((k * num_actions1() + i) * num_actions2() + j) *
                          num_states() + to];
  }

  // max |g|
  double payoff_norm() const;

  std::size_t state_index(const std::string& name) const;
  std::size_t action1_index(const std::string& name) const;
  std::size_t action2_index(const std::string& name) const;

  friend bool operator==(const GameSpec&, const GameSpec&) = default;
};

// A mixed action is a probability vector over an action set.
using MixedAction = Vector;

struct StationaryProfile {
  std::vector<MixedAction> x1;  // indexed by state, over actions1
  std::vector<MixedAction> x2;  // indexed by state, over actions2
};

struct MatrixGameSolution {
  double value = 0.0;
  MixedAction row_strategy;
  MixedAction col_strategy;
  // max(value - min_j (x A)_j, max_i (A y)_i - value)
  double guarantee_gap = 0.0;
};

struct DiscountedSolution {
  double lambda = 1.0;
  Vector values;
  StationaryProfile profile;
  double residual = 0.0;
  std::size_t iterations = 0;
};

// Leading term c * lambda^e of a sampled family.
struct LeadingTermFit {
  double coefficient = 0.0;
  Rational exponent{0};
  double fit_error = 0.0;
  std::int64_t denominator = 1;  // denominator of the snapped exponent
  bool zero = false;             // family identically zero on the tail
};

struct InducedChain {
  Matrix q;  // K x K, row-stochastic
  Vector g;  // stage payoff under the profile
};

// Below this, a probability is a structural zero.
inline constexpr double kStructuralZero = 1e-14;

std::vector<std::string> validate_game(const GameSpec& spec);
std::vector<std::string> validate_profile(const GameSpec& spec,
                                          const StationaryProfile& profile);

// Minimax solution of the matrix game where the row player maximizes.
// Throws NumericError (message includes the matrix) when the LP does not
// terminate or the certified guarantee gap exceeds tol.
MatrixGameSolution solve_matrix_game(const Matrix& a, double tol = 1e-9);

// R(i,j) = lambda g(k,i,j) + (1-lambda) sum_k' q(k'|k,i,j) v(k').
Matrix shapley_matrix(const GameSpec& spec, std::size_t k, double lambda,
                      const Vector& v);

// One application of the Shapley operator. If `profile` is non-null it
// receives the optimal strategies of the per-state matrix games.
Vector shapley_operator(const GameSpec& spec, double lambda, const Vector& v,
                        StationaryProfile* profile = nullptr);

// Default iteration cap 10 * ceil(ln(tol / 2||g||) / ln(1 - lambda)).
std::size_t default_iteration_cap(const GameSpec& spec, double lambda,
                                  double tol);

// Discounted value and an optimal stationary profile. max_iter == 0 selects
// default_iteration_cap.
DiscountedSolution solve_discounted(const GameSpec& spec, double lambda,
                                    double tol = 1e-10,
                                    std::size_t max_iter = 0);

// One solution per grid point, in grid order. Grid must be strictly
// decreasing in (0, 1].
std::vector<DiscountedSolution> value_curve(const GameSpec& spec,
                                            const std::vector<double>& lambdas,
                                            double tol = 1e-10);

// start, start*ratio, ..., count points.
std::vector<double> geometric_grid(double start, double ratio,
                                   std::size_t count);

InducedChain induced_chain(const GameSpec& spec,
                           const StationaryProfile& profile);

// Expected normalized discounted payoff of a stationary profile, every
// initial state: lambda (I - (1-lambda) Q)^{-1} g_x.
Vector evaluate_profile(const GameSpec& spec, const StationaryProfile& profile,
                        double lambda);

// Leading term of a family sampled at (lambda, value) pairs. Uses the half
// of the samples with the smallest lambda.
LeadingTermFit fit_leading_terms(std::vector<std::pair<double, double>> samples,
                                 int max_denominator = 12);

// Smallest-denominator rational within `window` of x, denominator <= n_max.
// Returns false if none exists.
bool snap_rational(double x, int n_max, double window, Rational* out);

// Strategy leading terms per state and action.
struct ProfileFits {
  std::vector<std::vector<LeadingTermFit>> x1;
  std::vector<std::vector<LeadingTermFit>> x2;
};

// x~(k,i) proportional to c(k,i) lambda^e(k,i).
StationaryProfile truncate_profile(const ProfileFits& fits, double lambda);

// Limit at lambda -> 0 of a family f(lambda) = a + b lambda^e + ...
struct Extrapolation {
  double limit = 0.0;
  double error = 0.0;   // a-posteriori estimate
  Rational exponent{0}; // of the first correction; 0 when f is flat
};
Extrapolation extrapolate_limit(std::vector<std::pair<double, double>> samples,
                                int max_denominator = 12);

}  // namespace dglab

#endif  // DGLAB_GAME_MODEL_HPP_
