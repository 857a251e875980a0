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

#include "dglab/clock_payoff.hpp"

#include <cmath>
#include <limits>

#include "dglab/errors.hpp"

namespace dglab {

double eta(double lambda, std::uint64_t m) {
  if (m == 0) return 0.0;
  if (lambda >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(m) * std::log1p(-lambda));
}

ClockPoint clock_point(double lambda, std::uint64_t m) {
  return ClockPoint{lambda, m, eta(lambda, m)};
}

std::uint64_t varphi(double lambda, double t) {
  if (t <= 0.0) return 1;
  if (t >= 1.0) return kInfiniteStage;
  if (lambda >= 1.0) return 1;
  double x = std::log1p(-t) / std::log1p(-lambda);
  if (!(x < 1e18)) return kInfiniteStage;
  std::uint64_t m = x < 1.0 ? 1 : static_cast<std::uint64_t>(std::ceil(x));
  while (m > 1 && eta(lambda, m - 1) >= t) --m;
  while (eta(lambda, m) < t) ++m;
  return m;
}

std::uint64_t stage_cap(double lambda) {
  if (lambda >= 1.0) return 1;
  return static_cast<std::uint64_t>(
      std::ceil(std::log(1e-16) / std::log1p(-lambda)));
}

Vector cumulated_payoff(const Matrix& q, const Vector& g, double lambda,
                        double t) {
  const Matrix sys = discounted_system(q, lambda);
  std::uint64_t m = varphi(lambda, t);
  if (m == kInfiniteStage || m >= stage_cap(lambda)) {
    // (1-lambda)^M < 1e-16: the truncated tail is below 1e-16 ||g||.
    return lambda * lu_solve(sys, g);
  }
  Matrix p = matrix_power((1.0 - lambda) * q, m);
  return lambda * lu_solve(sys, g - p * g);
}

double cumulated_payoff(const Matrix& q, const Vector& g, std::size_t k,
                        double lambda, double t) {
  return cumulated_payoff(q, g, lambda, t)(static_cast<Eigen::Index>(k));
}

OccupationMeasure occupation_measure(const Matrix& q, double lambda) {
  return occupation_measure(q, lambda, lambda, lambda);
}

OccupationMeasure occupation_measure(const Matrix& q, double lambda,
                                     double lambda1, double lambda2) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw ValidationError({"occupation_measure: lambda must lie in (0,1]"});
  }
  const Eigen::Index n = q.rows();
  Matrix pi = lambda * lu_solve(discounted_system(q, lambda), Matrix::Identity(n, n));
  return OccupationMeasure{pi, lambda, lambda1, lambda2};
}

VariationalReport check_variational(const GameSpec& spec,
                                    const DiscountedSolution& at,
                                    const DiscountedSolution& atp,
                                    double tol) {
  const double l = at.lambda, lp = atp.lambda;
  if (!(0.0 < lp && lp < l && l < 1.0)) {
    throw ValidationError({"check_variational: need 0 < lambda' < lambda < 1"});
  }
  VariationalReport rep;
  rep.lambda = l;
  rep.lambda_prime = lp;
  rep.r = lp * (1.0 - l) / (l * (1.0 - lp));
  const double r = rep.r;

  StationaryProfile mixed_a{at.profile.x1, atp.profile.x2};
  StationaryProfile mixed_b{atp.profile.x1, at.profile.x2};
  Matrix pi_a = occupation_measure(induced_chain(spec, mixed_a).q, l, l, lp).matrix;
  Matrix pi_b = occupation_measure(induced_chain(spec, mixed_b).q, l, lp, l).matrix;
  const Vector& v = at.values;
  const Vector& vp = atp.values;
  rep.lower_slack = vp - (r * v + (1.0 - r) * (pi_a * vp));
  rep.upper_slack = (r * v + (1.0 - r) * (pi_b * vp)) - vp;
  rep.min_slack = std::min(rep.lower_slack.minCoeff(), rep.upper_slack.minCoeff());
  rep.pass = rep.min_slack >= -tol;
  return rep;
}

VariationalReport check_variational(const GameSpec& spec, double lambda,
                                    double lambda_prime, double tol) {
  DiscountedSolution a = solve_discounted(spec, lambda);
  DiscountedSolution b = solve_discounted(spec, lambda_prime);
  return check_variational(spec, a, b, tol);
}

DerivativeReport derivative_check(const GameSpec& spec, double lambda,
                                  double h, double tol) {
  if (!(lambda - h > 0.0 && lambda + h < 1.0)) {
    throw ValidationError({"derivative_check: lambda +- h must lie in (0,1)"});
  }
  DiscountedSolution mid = solve_discounted(spec, lambda, tol);
  DiscountedSolution up = solve_discounted(spec, lambda + h, tol);
  DiscountedSolution dn = solve_discounted(spec, lambda - h, tol);
  Matrix pi = occupation_measure(induced_chain(spec, mid.profile).q, lambda).matrix;
  DerivativeReport rep;
  rep.lambda = lambda;
  rep.h = h;
  // Differentiating v = lambda g + (1 - lambda) Q v at a fixed profile gives
  // (v - Pi v) / (lambda (1 - lambda)); the opposite sign fails on any chain
  // whose value moves with lambda.
  rep.formula = (mid.values - pi * mid.values) / (lambda * (1.0 - lambda));
  rep.finite_diff = (up.values - dn.values) / (2.0 * h);
  rep.abs_mismatch = (rep.formula - rep.finite_diff).cwiseAbs();
  rep.rel_mismatch = Vector(rep.formula.size());
  for (Eigen::Index k = 0; k < rep.formula.size(); ++k) {
    double f = std::abs(rep.formula(k));
    rep.rel_mismatch(k) = f >= 1e-6 ? rep.abs_mismatch(k) / f
                                    : std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

SeriesValue b_lambda(double delta, double lambda,
                     const std::function<double(std::uint64_t)>& u,
                     double bound, std::uint64_t truncation) {
  const double dl = delta * lambda;
  if (!(delta > 0.0 && dl > 0.0 && dl < 1.0)) {
    throw ValidationError({"b_lambda: need delta > 0 and 0 < delta*lambda < 1"});
  }
  SeriesValue out;
  double w = dl;
  // Kahan summation: truncations run to millions of terms.
  double sum = 0.0, comp = 0.0;
  for (std::uint64_t m = 1; m <= truncation; ++m) {
    double y = w * u(m) - comp;
    double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    w *= 1.0 - dl;
  }
  out.value = sum;
  out.tail_bound = std::abs(bound) *
                   std::exp(static_cast<double>(truncation) * std::log1p(-dl));
  return out;
}

TransportSides transportation_identity(
    const std::function<double(std::uint64_t)>& a, double lambda,
    double lambda_prime, double tail) {
  const double l = lambda, lp = lambda_prime;
  if (!(0.0 < lp && lp < l && l < 1.0)) {
    throw ValidationError({"transportation_identity: need 0 < lambda' < lambda < 1"});
  }
  const double r = lp * (1.0 - l) / (l * (1.0 - lp));
  const double ratio = (1.0 - l) / (1.0 - lp);
  TransportSides out;
  double w = (l - lp) / (1.0 - lp);  // w_1
  double w_tail = 1.0;               // W_m = sum_{k>=m} w_k = ratio^{m-1}
  double partial = 0.0;              // sum_{l<m} lambda'(1-lambda')^{l-1} a_l
  double theta_p = lp;               // lambda'(1-lambda')^{m-1}
  double theta = l;                  // lambda(1-lambda)^{m-1}
  double lhs = 0.0, rhs = 0.0;
  std::uint64_t m = 1;
  for (; w_tail >= tail; ++m) {
    double am = a(m);
    lhs += w * partial;
    rhs += theta * am;
    partial += theta_p * am;
    w *= ratio;
    w_tail *= ratio;
    theta_p *= 1.0 - lp;
    theta *= 1.0 - l;
  }
  out.lhs = lhs;
  out.rhs = r * rhs;
  out.terms = m - 1;
  return out;
}

double h_payoff(const Matrix& q, const Vector& v, std::size_t k_bar,
                std::size_t k, double delta, double lambda) {
  const double dl = delta * lambda;
  if (!(dl > 0.0 && dl < 1.0)) {
    throw ValidationError({"h_payoff: need 0 < delta*lambda < 1"});
  }
  Vector dev = v.array() - v(static_cast<Eigen::Index>(k_bar));
  Vector h = dl * lu_solve(discounted_system(q, dl), dev);
  return h(static_cast<Eigen::Index>(k));
}

}  // namespace dglab
