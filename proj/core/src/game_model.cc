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

#include "dglab/game_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dglab/errors.hpp"
#include "dglab/parallel.hpp"

namespace dglab {

GameSpec::GameSpec(std::vector<std::string> states_in,
                   std::vector<std::string> actions1_in,
                   std::vector<std::string> actions2_in)
    : states(std::move(states_in)),
      actions1(std::move(actions1_in)),
      actions2(std::move(actions2_in)),
      payoff(states.size() * actions1.size() * actions2.size(), 0.0),
      transition(states.size() * actions1.size() * actions2.size() *
                     states.size(),
                 0.0) {}

double GameSpec::payoff_norm() const {
  double m = 0.0;
  for (double x : payoff) m = std::max(m, std::abs(x));
  return m;
}

namespace {

std::size_t find_name(const std::vector<std::string>& names,
                      const std::string& name, const char* what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw ValidationError({std::string("unknown ") + what + " '" + name + "'"});
  }
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

std::size_t GameSpec::state_index(const std::string& name) const {
  return find_name(states, name, "state");
}
std::size_t GameSpec::action1_index(const std::string& name) const {
  return find_name(actions1, name, "action1");
}
std::size_t GameSpec::action2_index(const std::string& name) const {
  return find_name(actions2, name, "action2");
}

std::vector<std::string> validate_game(const GameSpec& spec) {
  std::vector<std::string> out;
  const std::size_t K = spec.num_states(), I = spec.num_actions1(),
                    J = spec.num_actions2();
  if (K == 0) out.push_back("states empty");
  if (I == 0) out.push_back("actions1 empty");
  if (J == 0) out.push_back("actions2 empty");
  if (!out.empty()) return out;
  if (spec.payoff.size() != K * I * J) {
    out.push_back("payoff has " + std::to_string(spec.payoff.size()) +
                  " entries, expected " + std::to_string(K * I * J));
  }
  if (spec.transition.size() != K * I * J * K) {
    out.push_back("transition has " + std::to_string(spec.transition.size()) +
                  " entries, expected " + std::to_string(K * I * J * K));
  }
  if (!out.empty()) return out;
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < I; ++i) {
      for (std::size_t j = 0; j < J; ++j) {
        std::string where = "(" + std::to_string(k) + "," + std::to_string(i) +
                            "," + std::to_string(j) + ")";
        if (!std::isfinite(spec.g(k, i, j))) {
          out.push_back("payoff" + where + " not finite");
        }
        double sum = 0.0;
        bool range_ok = true;
        for (std::size_t to = 0; to < K; ++to) {
          double p = spec.q(k, i, j, to);
          if (!(p >= 0.0 && p <= 1.0)) range_ok = false;
          sum += p;
        }
        if (!range_ok) out.push_back("transition" + where + " entry outside [0,1]");
        if (!(std::abs(sum - 1.0) <= 1e-12)) {
          std::ostringstream os;
          os.precision(15);
          os << "transition" << where << " sums to " << sum;
          out.push_back(os.str());
        }
      }
    }
  }
  return out;
}

std::vector<std::string> validate_profile(const GameSpec& spec,
                                          const StationaryProfile& profile) {
  std::vector<std::string> out;
  const std::size_t K = spec.num_states();
  if (profile.x1.size() != K || profile.x2.size() != K) {
    out.push_back("profile not defined for every state");
    return out;
  }
  auto check = [&](const MixedAction& x, std::size_t n, const std::string& who) {
    if (static_cast<std::size_t>(x.size()) != n) {
      out.push_back(who + " has wrong length");
      return;
    }
    if ((x.array() < 0.0).any() || std::abs(x.sum() - 1.0) > 1e-12) {
      out.push_back(who + " is not a probability vector");
    }
  };
  for (std::size_t k = 0; k < K; ++k) {
    check(profile.x1[k], spec.num_actions1(), "x1[" + std::to_string(k) + "]");
    check(profile.x2[k], spec.num_actions2(), "x2[" + std::to_string(k) + "]");
  }
  return out;
}

Matrix shapley_matrix(const GameSpec& spec, std::size_t k, double lambda,
                      const Vector& v) {
  const std::size_t I = spec.num_actions1(), J = spec.num_actions2(),
                    K = spec.num_states();
  Matrix r(I, J);
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t j = 0; j < J; ++j) {
      double cont = 0.0;
      for (std::size_t to = 0; to < K; ++to) cont += spec.q(k, i, j, to) * v(to);
      r(i, j) = lambda * spec.g(k, i, j) + (1.0 - lambda) * cont;
    }
  }
  return r;
}

Vector shapley_operator(const GameSpec& spec, double lambda, const Vector& v,
                        StationaryProfile* profile) {
  const std::size_t K = spec.num_states();
  Vector out(K);
  if (profile) {
    profile->x1.assign(K, MixedAction());
    profile->x2.assign(K, MixedAction());
  }
  for (std::size_t k = 0; k < K; ++k) {
    MatrixGameSolution s = solve_matrix_game(shapley_matrix(spec, k, lambda, v));
    out(k) = s.value;
    if (profile) {
      profile->x1[k] = s.row_strategy;
      profile->x2[k] = s.col_strategy;
    }
  }
  return out;
}

std::size_t default_iteration_cap(const GameSpec& spec, double lambda,
                                  double tol) {
  double norm = std::max(spec.payoff_norm(), 1e-300);
  if (lambda >= 1.0) return 10;
  double n = std::ceil(std::log(tol / (2.0 * norm)) / std::log1p(-lambda));
  if (!(n >= 1.0)) n = 1.0;
  double cap = 10.0 * n;
  if (cap > 1e12) cap = 1e12;
  return static_cast<std::size_t>(cap);
}

InducedChain induced_chain(const GameSpec& spec,
                           const StationaryProfile& profile) {
  const std::size_t K = spec.num_states(), I = spec.num_actions1(),
                    J = spec.num_actions2();
  InducedChain c{Matrix::Zero(K, K), Vector::Zero(K)};
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < I; ++i) {
      double a = profile.x1[k](i);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < J; ++j) {
        double w = a * profile.x2[k](j);
        if (w == 0.0) continue;
        c.g(k) += w * spec.g(k, i, j);
        for (std::size_t to = 0; to < K; ++to) c.q(k, to) += w * spec.q(k, i, j, to);
      }
    }
  }
  return c;
}

Vector evaluate_profile(const GameSpec& spec, const StationaryProfile& profile,
                        double lambda) {
  InducedChain c = induced_chain(spec, profile);
  return lambda * lu_solve(discounted_system(c.q, lambda), c.g);
}

namespace {

// Value of player 1's best reply to the stationary strategy x2, by policy
// iteration over pure stationary policies.
Vector best_reply_value(const GameSpec& spec, double lambda,
                        const std::vector<MixedAction>& x2, const Vector& v0) {
  const std::size_t K = spec.num_states(), I = spec.num_actions1(),
                    J = spec.num_actions2();
  Matrix reward(K, I);
  std::vector<Matrix> trans(K, Matrix::Zero(I, K));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < I; ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < J; ++j) {
        double w = x2[k](j);
        if (w == 0.0) continue;
        r += w * spec.g(k, i, j);
        for (std::size_t to = 0; to < K; ++to) trans[k](i, to) += w * spec.q(k, i, j, to);
      }
      reward(k, i) = r;
    }
  }
  auto q_value = [&](std::size_t k, std::size_t i, const Vector& w) {
    return lambda * reward(k, i) + (1.0 - lambda) * trans[k].row(i).dot(w);
  };
  std::vector<std::size_t> policy(K, 0);
  for (std::size_t k = 0; k < K; ++k) {
    double best = q_value(k, 0, v0);
    for (std::size_t i = 1; i < I; ++i) {
      double c = q_value(k, i, v0);
      if (c > best) {
        best = c;
        policy[k] = i;
      }
    }
  }
  const double eps = 1e-14 * std::max(1.0, spec.payoff_norm());
  Vector w;
  for (int it = 0; it < 200; ++it) {
    Matrix q(K, K);
    Vector g(K);
    for (std::size_t k = 0; k < K; ++k) {
      q.row(k) = trans[k].row(policy[k]);
      g(k) = reward(k, policy[k]);
    }
    w = lambda * lu_solve(discounted_system(q, lambda), g);
    bool changed = false;
    for (std::size_t k = 0; k < K; ++k) {
      double cur = q_value(k, policy[k], w);
      for (std::size_t i = 0; i < I; ++i) {
        double c = q_value(k, i, w);
        if (c > cur + eps) {
          cur = c;
          policy[k] = i;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return w;
}

}  // namespace

// Newton (policy) iteration on the Shapley operator: the next iterate is the
// value of the equilibrium profile of the current local games. When Newton
// stalls, a Hoffman-Karp step is taken instead: the minimizer's strategy at
// the best point so far is held fixed and the maximizer's best-reply value
// becomes the next iterate, which always contracts.
DiscountedSolution solve_discounted(const GameSpec& spec, double lambda,
                                    double tol, std::size_t max_iter) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw ValidationError({"lambda must lie in (0,1]"});
  }
  if (!(tol > 0.0)) throw ValidationError({"tol must be positive"});
  const std::size_t cap =
      max_iter ? max_iter : default_iteration_cap(spec, lambda, tol);
  const std::size_t K = spec.num_states();
  Vector v = Vector::Zero(K);
  Vector best_v = v;
  double best_res = std::numeric_limits<double>::infinity();
  double prev_res = best_res;
  std::size_t stall = 0;
  for (std::size_t iter = 1; iter <= cap; ++iter) {
    StationaryProfile prof;
    Vector tv = shapley_operator(spec, lambda, v, &prof);
    double res = (tv - v).cwiseAbs().maxCoeff();
    // The residual bounds the value error only by res / lambda, so keep going
    // while that bound still improves.
    if (res <= tol && (res <= tol * lambda || res > 0.5 * prev_res)) {
      return DiscountedSolution{lambda, v, std::move(prof), res, iter};
    }
    prev_res = res;
    // v = 0 has residual lambda ||g|| however far it is from the fixed point,
    // so it never serves as a fallback.
    if (iter > 1 && res < best_res) {
      best_res = res;
      best_v = v;
      stall = 0;
    } else {
      ++stall;
    }
    if (lambda >= 1.0) {
      v = tv;
    } else if (stall < 10) {
      // Newton step: the value of the current equilibrium profile.
      InducedChain c = induced_chain(spec, prof);
      v = lambda * lu_solve(discounted_system(c.q, lambda), c.g);
    } else {
      // Newton is not making progress; take a best-reply step from the best
      // point seen so far, which always contracts.
      StationaryProfile best_prof;
      Vector tb = shapley_operator(spec, lambda, best_v, &best_prof);
      v = best_reply_value(spec, lambda, best_prof.x2, tb);
      stall = 0;
    }
  }
  std::ostringstream os;
  os << "solve_discounted: iteration cap " << cap << " reached at lambda="
     << lambda;
  throw NumericError(os.str());
}

std::vector<DiscountedSolution> value_curve(const GameSpec& spec,
                                            const std::vector<double>& lambdas,
                                            double tol) {
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0 && lambdas[i] <= 1.0) ||
        (i > 0 && !(lambdas[i] < lambdas[i - 1]))) {
      throw ValidationError({"lambda grid must be strictly decreasing in (0,1]"});
    }
  }
  std::vector<DiscountedSolution> out(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t i) {
    try {
      out[i] = solve_discounted(spec, lambdas[i], tol);
    } catch (const NumericError& e) {
      std::ostringstream os;
      os << "value_curve: lambda=" << lambdas[i] << ": " << e.what();
      throw NumericError(os.str());
    }
  });
  return out;
}

std::vector<double> geometric_grid(double start, double ratio,
                                   std::size_t count) {
  std::vector<double> g;
  g.reserve(count);
  double x = start;
  for (std::size_t i = 0; i < count; ++i) {
    g.push_back(x);
    x *= ratio;
  }
  return g;
}

}  // namespace dglab
