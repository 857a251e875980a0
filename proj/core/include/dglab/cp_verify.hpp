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

#ifndef DGLAB_CP_VERIFY_HPP_
#define DGLAB_CP_VERIFY_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dglab/cycle_analysis.hpp"
#include "dglab/game_model.hpp"

namespace dglab {

struct EntryFit {
  std::size_t from = 0;
  std::size_t to = 0;
  LeadingTermFit fit;
};

struct ProfileLimit {
  LeadingTermChain fitted_chain;
  Vector g_star;
  Vector v_star;
  Vector v_star_error;       // per state, from the extrapolation
  Vector v_tilde;            // per relevant cycle
  double constancy_residual = 0.0;
  bool constant_on_cycles = true;
  std::vector<EntryFit> fit_report;
  // Strategy fits; absent when some entry could not be fitted.
  std::optional<ProfileFits> strategy_fits;
  std::string strategy_fit_error;
  std::vector<double> lambdas;
  std::vector<std::string> notes;

  double extrapolation_tolerance() const;
};

struct VerifiedLimit {
  ProfileLimit limit;
  LimitDecomposition decomposition;
  std::vector<DiscountedSolution> solutions;  // on limit.lambdas
};

VerifiedLimit build_profile_limit(const GameSpec& spec,
                                  const std::vector<double>& lambdas,
                                  double tol = 1e-10);

// Limit data taken as given (no fitting); v_tilde and constancy are filled in.
VerifiedLimit exact_limit(const LeadingTermChain& chain, const Vector& g_star,
                          const Vector& v_star);

struct CpReport {
  std::string check;
  std::vector<std::pair<std::string, double>> residuals;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, std::vector<double>>> inputs;
  std::string note;

  double max_residual() const;
};

inline const std::vector<double>& default_t_grid() {
  static const std::vector<double> grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                           0.6, 0.7, 0.8, 0.9, 0.99};
  return grid;
}

// Threshold for the limit identities on fitted data.
double identity_tolerance(const ProfileLimit& limit);

CpReport verify_weak_cp(const GameSpec& spec, const ProfileLimit& limit,
                        double lambda_eval, const std::vector<double>& t_grid,
                        double eps, double tol = 1e-10);
// Same check against an explicit stationary profile.
CpReport verify_weak_cp(const GameSpec& spec, const ProfileLimit& limit,
                        const StationaryProfile& profile, double lambda_eval,
                        const std::vector<double>& t_grid, double eps,
                        const std::string& name = "weak_cp");

CpReport check_constancy(const ProfileLimit& limit);
CpReport check_invariance(const ProfileLimit& limit,
                          const LimitDecomposition& d,
                          const std::vector<double>& t_grid, double tol);
CpReport check_cycle_values(const ProfileLimit& limit,
                            const LimitDecomposition& d, double tol);
CpReport check_limit_shapley(const ProfileLimit& limit,
                             const LimitDecomposition& d,
                             const std::vector<double>& t_grid, double tol);
// <pi_t(k,.), g*> = v*(k) on the grid.
CpReport check_payoff_rate(const ProfileLimit& limit,
                           const LimitDecomposition& d,
                           const std::vector<double>& t_grid, double tol);
// Cycle-aggregated position matrices applied to v_tilde agree for all t1 < t2.
CpReport check_martingale(const ProfileLimit& limit,
                          const LimitDecomposition& d,
                          const std::vector<double>& t_grid, double tol);
CpReport check_truncated_profile(const GameSpec& spec,
                                 const ProfileLimit& limit, double lambda_eval,
                                 const std::vector<double>& t_grid, double eps);
CpReport aux_payoff_scan(const GameSpec& spec, const ProfileLimit& limit,
                         std::size_t k_bar, const std::vector<double>& deltas,
                         const std::vector<double>& lambdas, double eps,
                         double tol = 1e-10);

struct PayoffCurveRow {
  double t = 0.0;
  double gamma = 0.0;
  double t_times_vstar = 0.0;
  double abs_gap = 0.0;
};
// gamma_lambda(k; t) under `profile` against t * v*(k).
std::vector<PayoffCurveRow> payoff_curve(const GameSpec& spec,
                                         const StationaryProfile& profile,
                                         double lambda, std::size_t k,
                                         double v_star,
                                         const std::vector<double>& t_grid);

// Replaces player 2's strategy by a pure action in every state.
StationaryProfile with_fixed_opponent(const StationaryProfile& profile,
                                      std::size_t action);

struct VerifyOptions {
  std::vector<double> t_grid = default_t_grid();
  double eps = 0.05;
  double lambda_eval = 1e-5;
  double tol = 1e-10;
  std::vector<double> aux_deltas = {0.5, 1.0, 2.0};
  std::vector<double> aux_lambdas = {1e-3, 1e-4, 1e-5};
};

// Every check on the Puiseux profile, sorted by check name.
std::vector<CpReport> run_verification(const GameSpec& spec,
                                       const VerifiedLimit& v,
                                       const VerifyOptions& options);

}  // namespace dglab

#endif  // DGLAB_CP_VERIFY_HPP_
