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

#ifndef DGLAB_LINALG_HPP_
#define DGLAB_LINALG_HPP_

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dglab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Solves A X = B with partial-pivoting LU. Throws NumericError when A is
// numerically singular.
Matrix lu_solve(const Matrix& a, const Matrix& b);

// I - (1 - lambda) Q with the diagonal assembled as
// lambda + (1 - lambda) * (off-diagonal row mass), which keeps small exit
// probabilities from cancelling against 1.
Matrix discounted_system(const Matrix& q, double lambda);

// A^n by repeated squaring.
Matrix matrix_power(const Matrix& a, std::uint64_t n);

// Matrix exponential (scaling and squaring, degree-13 Pade).
Matrix expm(const Matrix& a);

// Absorption probabilities of a substochastic chain, computed by
// subtraction-free state reduction. `transient` holds transitions among
// transient states (its diagonal is ignored); `absorbing` holds transitions
// into absorbing targets. Row sums of the result are 1 whenever every
// transient state can reach a target.
Matrix absorption_probabilities(const Matrix& transient, const Matrix& absorbing);

// Invariant probability of an irreducible stochastic matrix (the diagonal is
// ignored), by subtraction-free state reduction.
Vector stationary_distribution(const Matrix& p);

// Nodes and weights of the n-point Gauss-Legendre rule on [a, b].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n,
                                                                    double a,
                                                                    double b);

// Adaptive Gauss-Kronrod (7-15) integration of a vector-valued integrand.
Vector integrate_adaptive(const std::function<Vector(double)>& f, double a,
                          double b, double tol, int max_depth = 40);

}  // namespace dglab

#endif  // DGLAB_LINALG_HPP_
