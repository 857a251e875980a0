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

#ifndef DGLAB_CLOCK_PAYOFF_HPP_
#define DGLAB_CLOCK_PAYOFF_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "dglab/game_model.hpp"
#include "dglab/linalg.hpp"

namespace dglab {

// Returned by varphi when the clock never reaches t (t = 1).
inline constexpr std::uint64_t kInfiniteStage =
    std::numeric_limits<std::uint64_t>::max();

struct ClockPoint {
  double lambda = 0.0;
  std::uint64_t stage = 0;
  double weight = 0.0;  // eta(lambda, stage)
};

// Total weight of the first M stages: 1 - (1 - lambda)^M.
double eta(double lambda, std::uint64_t m);
ClockPoint clock_point(double lambda, std::uint64_t m);

// First stage M >= 1 with eta(lambda, M) >= t; kInfiniteStage for t >= 1.
std::uint64_t varphi(double lambda, double t);

// Stage count past which (1 - lambda)^M < 1e-16 and the full resolvent is
// used instead of a finite truncation.
std::uint64_t stage_cap(double lambda);

// Expected payoff collected during stages 1..varphi(lambda, t), every
// initial state. At t = 1 this is the full discounted payoff.
Vector cumulated_payoff(const Matrix& q, const Vector& g, double lambda,
                        double t);
double cumulated_payoff(const Matrix& q, const Vector& g, std::size_t k,
                        double lambda, double t);

// Discounted occupation measure lambda (I - (1-lambda) Q)^{-1}. The caller
// chooses which profile induced Q; params records (lambda, lambda', lambda'').
struct OccupationMeasure {
  Matrix matrix;
  double lambda = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};
OccupationMeasure occupation_measure(const Matrix& q, double lambda);
OccupationMeasure occupation_measure(const Matrix& q, double lambda,
                                     double lambda1, double lambda2);

// Both discounted-value inequalities between lambda' < lambda. Slacks are
// lhs - rhs oriented so that a valid inequality has slack >= 0.
struct VariationalReport {
  double lambda = 0.0;
  double lambda_prime = 0.0;
  double r = 0.0;                  // lambda'(1-lambda) / (lambda(1-lambda'))
  Vector lower_slack;              // v' - [r v + (1-r) <Pi_{l,l,l'}, v'>]
  Vector upper_slack;              // [r v + (1-r) <Pi_{l,l',l}, v'>] - v'
  double min_slack = 0.0;
  bool pass = false;
};
VariationalReport check_variational(const GameSpec& spec, double lambda,
                                    double lambda_prime, double tol);
VariationalReport check_variational(const GameSpec& spec,
                                    const DiscountedSolution& at_lambda,
                                    const DiscountedSolution& at_lambda_prime,
                                    double tol);

// Closed-form derivative of v_lambda against a central difference.
struct DerivativeReport {
  double lambda = 0.0;
  double h = 0.0;
  Vector formula;      // (v - <Pi_{l,l,l}, v>) / (lambda (1 - lambda))
  Vector finite_diff;  // (v_{l+h} - v_{l-h}) / 2h
  Vector abs_mismatch;
  Vector rel_mismatch;  // abs / |formula|, NaN where |formula| < 1e-6
};
DerivativeReport derivative_check(const GameSpec& spec, double lambda,
                                  double h, double tol = 1e-12);

// Sum_{m>=1} delta lambda (1 - delta lambda)^{m-1} u_m truncated after
// `truncation` terms. tail_bound = bound * (1 - delta lambda)^truncation.
struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
};
SeriesValue b_lambda(double delta, double lambda,
                     const std::function<double(std::uint64_t)>& u,
                     double bound, std::uint64_t truncation);

// Both sides of the transportation identity for a bounded sequence a_m and
// 0 < lambda' < lambda < 1:
//   sum_m w_m sum_{l<m} lambda'(1-lambda')^{l-1} a_l
//     = r sum_m lambda (1-lambda)^{m-1} a_m,
// with w_m = (lambda-lambda')/(1-lambda') ((1-lambda)/(1-lambda'))^{m-1}.
// Sums stop once the remaining w-mass drops below `tail`.
struct TransportSides {
  double lhs = 0.0;
  double rhs = 0.0;
  std::uint64_t terms = 0;
};
TransportSides transportation_identity(
    const std::function<double(std::uint64_t)>& a, double lambda,
    double lambda_prime, double tail = 1e-12);

// delta lambda (I - (1 - delta lambda) Q)^{-1} (v - v(k_bar) 1), at state k.
double h_payoff(const Matrix& q, const Vector& v, std::size_t k_bar,
                std::size_t k, double delta, double lambda);

}  // namespace dglab

#endif  // DGLAB_CLOCK_PAYOFF_HPP_
