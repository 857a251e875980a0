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

#include "dglab/cp_verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "dglab/clock_payoff.hpp"
#include "dglab/errors.hpp"
#include "dglab/io.hpp"
#include "dglab/parallel.hpp"

namespace dglab {
namespace {

using Index = Eigen::Index;

std::string at_t(double t) { return "t=" + format_double(t); }

std::string cycle_name(const LeadingTermChain& chain, const CycleNode& n) {
  std::string s = "{";
  for (std::size_t i = 0; i < n.members.size(); ++i) {
    if (i) s += ",";
    s += chain.states[n.members[i]];
  }
  return s + "}";
}

void finish(CpReport* r) {
  r->pass = true;
  for (const auto& [name, v] : r->residuals) {
    if (!std::isfinite(v) || v > r->tolerance) r->pass = false;
  }
}

std::vector<double> below_one(const std::vector<double>& t_grid) {
  std::vector<double> out;
  for (double t : t_grid) {
    if (t >= 0.0 && t < 1.0) out.push_back(t);
  }
  return out;
}

// Integral of pi_s g* over s in [0,t]: with s = 1 - e^{-a}, ds = e^{-a} da.
Vector integrated_payoff(const LimitDecomposition& d, const Vector& mg,
                         double t) {
  const double alpha_t = -std::log1p(-t);
  if (alpha_t == 0.0) return Vector::Zero(d.entrance_law.rows());
  auto f = [&](double a) -> Vector {
    return std::exp(-a) * (expm(a * d.generator) * mg);
  };
  return d.entrance_law * integrate_adaptive(f, 0.0, alpha_t, 1e-12);
}

void fill_cycle_values(ProfileLimit* limit, const LimitDecomposition& d) {
  const std::size_t L = d.num_relevant();
  limit->v_tilde = Vector::Zero(static_cast<Index>(L));
  limit->constancy_residual = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    const CycleNode& n = d.tree.nodes[d.relevant[l]];
    double s = 0.0;
    for (std::size_t k : n.members) s += limit->v_star(static_cast<Index>(k));
    double mean = s / static_cast<double>(n.members.size());
    limit->v_tilde(static_cast<Index>(l)) = mean;
    for (std::size_t k : n.members) {
      limit->constancy_residual = std::max(
          limit->constancy_residual,
          std::abs(limit->v_star(static_cast<Index>(k)) - mean));
    }
  }
  limit->constant_on_cycles =
      limit->constancy_residual <= std::max(1e-9, 5.0 * limit->extrapolation_tolerance());
}

}  // namespace

double ProfileLimit::extrapolation_tolerance() const {
  return v_star_error.size() ? v_star_error.maxCoeff() : 0.0;
}

double CpReport::max_residual() const {
  double m = 0.0;
  for (const auto& [name, v] : residuals) m = std::max(m, v);
  return m;
}

double identity_tolerance(const ProfileLimit& limit) {
  return std::max(2e-2, 5.0 * limit.extrapolation_tolerance());
}

VerifiedLimit build_profile_limit(const GameSpec& spec,
                                  const std::vector<double>& lambdas,
                                  double tol) {
  if (lambdas.size() < 8) {
    throw ValidationError({"insufficient grid: need at least 8 discount factors, got " +
                           std::to_string(lambdas.size())});
  }
  if (*std::min_element(lambdas.begin(), lambdas.end()) > 1e-6) {
    throw ValidationError({"insufficient grid: the smallest discount factor must be <= 1e-6"});
  }
  VerifiedLimit out;
  out.solutions = value_curve(spec, lambdas, tol);
  ProfileLimit& lim = out.limit;
  lim.lambdas = lambdas;
  const std::size_t K = spec.num_states();
  const Index Ki = static_cast<Index>(K);

  std::vector<InducedChain> chains;
  for (const DiscountedSolution& s : out.solutions) {
    chains.push_back(induced_chain(spec, s.profile));
  }
  auto series = [&](auto get) {
    std::vector<std::pair<double, double>> v;
    for (std::size_t n = 0; n < lambdas.size(); ++n) v.emplace_back(lambdas[n], get(n));
    return v;
  };

  // Leading terms of every entry of Q_lambda.
  LeadingTermChain& chain = lim.fitted_chain;
  chain.states = spec.states;
  std::vector<std::vector<LeadingTermFit>> fits(K, std::vector<LeadingTermFit>(K));
  for (std::size_t a = 0; a < K; ++a) {
    for (std::size_t b = 0; b < K; ++b) {
      auto samples = series([&](std::size_t n) {
        return chains[n].q(static_cast<Index>(a), static_cast<Index>(b));
      });
      try {
        fits[a][b] = fit_leading_terms(samples);
      } catch (const FitRejected& e) {
        throw FitRejected("Q entry (" + spec.states[a] + "," + spec.states[b] +
                          "): " + e.what());
      }
      lim.fit_report.push_back(EntryFit{a, b, fits[a][b]});
    }
  }
  std::int64_t den = 1;
  for (std::size_t a = 0; a < K; ++a) {
    std::vector<ChainTerm> row;
    double order0 = 0.0;
    for (std::size_t b = 0; b < K; ++b) {
      const LeadingTermFit& f = fits[a][b];
      if (b == a || f.zero) continue;
      row.push_back(ChainTerm{a, b, f.coefficient, f.exponent});
      if (f.exponent == Rational(0)) order0 += f.coefficient;
    }
    const LeadingTermFit& diag = fits[a][a];
    bool diag_vanishes = diag.zero || diag.exponent > Rational(0);
    if (order0 > 0.0 && (diag_vanishes || order0 > 1.0)) {
      if (std::abs(order0 - 1.0) > 1e-12 || !diag_vanishes) {
        std::ostringstream os;
        os.precision(12);
        os << "row " << spec.states[a] << ": order-0 exits rescaled from " << order0
           << " to 1";
        lim.notes.push_back(os.str());
      }
      for (ChainTerm& t : row) {
        if (t.exponent == Rational(0)) t.coeff /= order0;
      }
    }
    if (row.empty()) row.push_back(ChainTerm{a, a, 1.0, Rational(0)});
    for (const ChainTerm& t : row) {
      den = lcm64(den, t.exponent.den());
      chain.terms.push_back(t);
    }
  }
  chain.denominator = den;
  require_valid_chain(chain);

  lim.g_star = Vector::Zero(Ki);
  lim.v_star = Vector::Zero(Ki);
  lim.v_star_error = Vector::Zero(Ki);
  for (std::size_t k = 0; k < K; ++k) {
    const Index ki = static_cast<Index>(k);
    Extrapolation g = extrapolate_limit(series([&](std::size_t n) { return chains[n].g(ki); }));
    Extrapolation v = extrapolate_limit(
        series([&](std::size_t n) { return out.solutions[n].values(ki); }));
    lim.g_star(ki) = g.limit;
    lim.v_star(ki) = v.limit;
    lim.v_star_error(ki) = v.error;
  }

  // Strategy fits feed the truncated profile; a failure here only disables it.
  try {
    ProfileFits pf;
    pf.x1.resize(K);
    pf.x2.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t i = 0; i < spec.num_actions1(); ++i) {
        pf.x1[k].push_back(fit_leading_terms(series([&](std::size_t n) {
          return out.solutions[n].profile.x1[k](static_cast<Index>(i));
        })));
      }
      for (std::size_t j = 0; j < spec.num_actions2(); ++j) {
        pf.x2[k].push_back(fit_leading_terms(series([&](std::size_t n) {
          return out.solutions[n].profile.x2[k](static_cast<Index>(j));
        })));
      }
    }
    lim.strategy_fits = std::move(pf);
  } catch (const NumericError& e) {
    lim.strategy_fit_error = e.what();
  }

  out.decomposition = decompose(chain);
  fill_cycle_values(&lim, out.decomposition);
  return out;
}

VerifiedLimit exact_limit(const LeadingTermChain& chain, const Vector& g_star,
                          const Vector& v_star) {
  require_valid_chain(chain);
  VerifiedLimit out;
  out.limit.fitted_chain = chain;
  out.limit.g_star = g_star;
  out.limit.v_star = v_star;
  out.limit.v_star_error = Vector::Zero(v_star.size());
  out.limit.strategy_fit_error = "no strategy data";
  out.decomposition = decompose(chain);
  fill_cycle_values(&out.limit, out.decomposition);
  return out;
}

std::vector<PayoffCurveRow> payoff_curve(const GameSpec& spec,
                                         const StationaryProfile& profile,
                                         double lambda, std::size_t k,
                                         double v_star,
                                         const std::vector<double>& t_grid) {
  InducedChain c = induced_chain(spec, profile);
  std::vector<PayoffCurveRow> rows;
  for (double t : t_grid) {
    double gamma = cumulated_payoff(c.q, c.g, k, lambda, t);
    rows.push_back(PayoffCurveRow{t, gamma, t * v_star, std::abs(gamma - t * v_star)});
  }
  return rows;
}

CpReport verify_weak_cp(const GameSpec& spec, const ProfileLimit& limit,
                        double lambda_eval, const std::vector<double>& t_grid,
                        double eps, double tol) {
  DiscountedSolution s = solve_discounted(spec, lambda_eval, tol);
  return verify_weak_cp(spec, limit, s.profile, lambda_eval, t_grid, eps);
}

CpReport verify_weak_cp(const GameSpec& spec, const ProfileLimit& limit,
                        const StationaryProfile& profile, double lambda_eval,
                        const std::vector<double>& t_grid, double eps,
                        const std::string& name) {
  CpReport r;
  r.check = name;
  r.tolerance = eps;
  InducedChain c = induced_chain(spec, profile);
  for (double t : t_grid) {
    Vector gamma = cumulated_payoff(c.q, c.g, lambda_eval, t);
    for (std::size_t k = 0; k < spec.num_states(); ++k) {
      const Index ki = static_cast<Index>(k);
      r.residuals.emplace_back("gap[" + spec.states[k] + "," + at_t(t) + "]",
                               std::abs(gamma(ki) - t * limit.v_star(ki)));
    }
  }
  r.inputs = {{"lambda_eval", {lambda_eval}}, {"t_grid", t_grid},
              {"lambda_grid", limit.lambdas}};
  finish(&r);
  return r;
}

CpReport check_constancy(const ProfileLimit& limit) {
  CpReport r;
  r.check = "constancy";
  r.tolerance = std::max(1e-9, 5.0 * limit.extrapolation_tolerance());
  r.residuals.emplace_back("max_state_deviation", limit.constancy_residual);
  r.inputs = {{"lambda_grid", limit.lambdas},
              {"v_star_error", std::vector<double>(limit.v_star_error.data(),
                                                   limit.v_star_error.data() +
                                                       limit.v_star_error.size())}};
  finish(&r);
  return r;
}

CpReport check_invariance(const ProfileLimit& limit,
                          const LimitDecomposition& d,
                          const std::vector<double>& t_grid, double tol) {
  CpReport r;
  r.check = "invariance";
  r.tolerance = tol;
  const Vector& v = limit.v_star;
  r.residuals.emplace_back("Pi", (limit_occupation(d) * v - v).cwiseAbs().maxCoeff());
  std::vector<double> ts = below_one(t_grid);
  for (double t : ts) {
    r.residuals.emplace_back("pi[" + at_t(t) + "]",
                             (position_matrix(d, t).matrix * v - v).cwiseAbs().maxCoeff());
  }
  r.inputs = {{"t_grid", ts}, {"lambda_grid", limit.lambdas}};
  finish(&r);
  return r;
}

CpReport check_cycle_values(const ProfileLimit& limit,
                            const LimitDecomposition& d, double tol) {
  CpReport r;
  r.check = "cycle_values";
  r.tolerance = tol;
  const Vector& v = limit.v_star;
  const Vector& g = limit.g_star;
  const Index K = v.size();
  Matrix pi = limit_occupation(d);
  std::vector<std::string> skipped;
  for (std::size_t l = 0; l < d.num_relevant(); ++l) {
    const CycleNode& c = d.tree.nodes[d.relevant[l]];
    const std::string name = cycle_name(limit.fitted_chain, c);
    if (d.classes[l] != CycleClass::kRecurrent) {
      skipped.push_back(name + " skipped: not recurrent");
      continue;
    }
    Vector mu = Vector::Zero(K);
    if (c.singleton()) {
      mu(static_cast<Index>(c.members[0])) = 1.0;
    } else {
      mu = *c.mixing_distribution;
    }
    const Vector& p = *c.exit_distribution;
    const double rate = c.exit_rate;
    const double pv = p.dot(v), mg = mu.dot(g);
    Vector split = (mu + rate * (pi.transpose() * p)) / (1.0 + rate);
    double r_pv = 0.0, r_mg = 0.0, r_mix = 0.0, r_occ = 0.0;
    for (std::size_t k : c.members) {
      const double vk = v(static_cast<Index>(k));
      r_pv = std::max(r_pv, std::abs(pv - vk));
      r_mg = std::max(r_mg, std::abs(mg - vk));
      r_mix = std::max(r_mix, std::abs(vk - (mg + rate * pv) / (1.0 + rate)));
      r_occ = std::max(r_occ, (pi.row(static_cast<Index>(k)).transpose() - split)
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    r.residuals.emplace_back("p_v[" + name + "]", r_pv);
    r.residuals.emplace_back("mu_g[" + name + "]", r_mg);
    r.residuals.emplace_back("mixed[" + name + "]", r_mix);
    r.residuals.emplace_back("occupation_split[" + name + "]", r_occ);
  }
  for (std::size_t i = 0; i < skipped.size(); ++i) {
    r.note += (i ? "; " : "") + skipped[i];
  }
  r.inputs = {{"lambda_grid", limit.lambdas}};
  finish(&r);
  return r;
}

CpReport check_limit_shapley(const ProfileLimit& limit,
                             const LimitDecomposition& d,
                             const std::vector<double>& t_grid, double tol) {
  CpReport r;
  r.check = "limit_shapley";
  r.tolerance = tol;
  const Vector& v = limit.v_star;
  const Vector mg = d.mixing_matrix * limit.g_star;
  const Index L = d.generator.rows();
  const Matrix resolvent = lu_solve(Matrix::Identity(L, L) - d.generator, Matrix::Identity(L, L));
  std::vector<double> ts = below_one(t_grid);
  double cross = 0.0;
  for (double t : ts) {
    Vector integral = integrated_payoff(d, mg, t);
    Matrix e = expm(-std::log1p(-t) * d.generator);
    Vector closed = d.entrance_law * resolvent *
                    (mg - (1.0 - t) * (e * mg));
    cross = std::max(cross, (integral - closed).cwiseAbs().maxCoeff());
    Vector rhs = integral + (1.0 - t) * (d.entrance_law * e * d.mixing_matrix * v);
    for (Index k = 0; k < v.size(); ++k) {
      r.residuals.emplace_back(
          "shapley[" + limit.fitted_chain.states[static_cast<std::size_t>(k)] + "," +
              at_t(t) + "]",
          std::abs(v(k) - rhs(k)));
    }
  }
  std::ostringstream os;
  os << "quadrature vs closed form: " << format_double(cross);
  r.note = os.str();
  r.inputs = {{"t_grid", ts}, {"lambda_grid", limit.lambdas}};
  finish(&r);
  if (!(cross <= std::max(1e-8, tol))) r.pass = false;
  return r;
}

CpReport check_payoff_rate(const ProfileLimit& limit,
                           const LimitDecomposition& d,
                           const std::vector<double>& t_grid, double tol) {
  CpReport r;
  r.check = "payoff_rate";
  r.tolerance = tol;
  std::vector<double> ts = below_one(t_grid);
  for (double t : ts) {
    Vector rate = position_matrix(d, t).matrix * limit.g_star;
    for (Index k = 0; k < rate.size(); ++k) {
      r.residuals.emplace_back(
          "rate[" + limit.fitted_chain.states[static_cast<std::size_t>(k)] + "," +
              at_t(t) + "]",
          std::abs(rate(k) - limit.v_star(k)));
    }
  }
  r.inputs = {{"t_grid", ts}, {"lambda_grid", limit.lambdas}};
  finish(&r);
  return r;
}

CpReport check_martingale(const ProfileLimit& limit,
                          const LimitDecomposition& d,
                          const std::vector<double>& t_grid, double tol) {
  CpReport r;
  r.check = "martingale";
  r.tolerance = tol;
  std::vector<double> ts = below_one(t_grid);
  std::vector<Vector> img;
  for (double t : ts) img.push_back(expm(-std::log1p(-t) * d.generator) * limit.v_tilde);
  for (std::size_t a = 0; a < ts.size(); ++a) {
    for (std::size_t b = a + 1; b < ts.size(); ++b) {
      r.residuals.emplace_back(
          "pair[" + at_t(ts[a]) + "," + at_t(ts[b]) + "]",
          img[a].size() ? (img[a] - img[b]).cwiseAbs().maxCoeff() : 0.0);
    }
  }
  r.inputs = {{"t_grid", ts}, {"lambda_grid", limit.lambdas}};
  finish(&r);
  return r;
}

CpReport check_truncated_profile(const GameSpec& spec,
                                 const ProfileLimit& limit, double lambda_eval,
                                 const std::vector<double>& t_grid, double eps) {
  if (!limit.strategy_fits) {
    CpReport r;
    r.check = "truncated_profile";
    r.tolerance = eps;
    r.pass = false;
    r.note = "strategy fits unavailable: " + limit.strategy_fit_error;
    r.inputs = {{"lambda_eval", {lambda_eval}}, {"t_grid", t_grid}};
    return r;
  }
  StationaryProfile p = truncate_profile(*limit.strategy_fits, lambda_eval);
  return verify_weak_cp(spec, limit, p, lambda_eval, t_grid, eps, "truncated_profile");
}

CpReport aux_payoff_scan(const GameSpec& spec, const ProfileLimit& limit,
                         std::size_t k_bar, const std::vector<double>& deltas,
                         const std::vector<double>& lambdas, double eps,
                         double tol) {
  CpReport r;
  r.check = "aux_payoff[" + spec.states.at(k_bar) + "]";
  r.tolerance = eps;
  std::vector<std::vector<double>> h(deltas.size());
  for (double lambda : lambdas) {
    DiscountedSolution s = solve_discounted(spec, lambda, tol);
    InducedChain c = induced_chain(spec, s.profile);
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      h[i].push_back(std::abs(h_payoff(c.q, s.values, k_bar, k_bar, deltas[i], lambda)));
    }
  }
  bool monotone = true;
  r.pass = true;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    for (std::size_t n = 0; n < lambdas.size(); ++n) {
      r.residuals.emplace_back("h[delta=" + format_double(deltas[i]) +
                                   ",lambda=" + format_double(lambdas[n]) + "]",
                               h[i][n]);
      if (n > 0 && h[i][n] > h[i][n - 1] + 1e-9) monotone = false;
    }
    if (!h[i].empty() && !(h[i].back() <= eps)) r.pass = false;
  }
  if (!monotone) {
    r.pass = false;
    r.note = "|h| not decreasing along the lambda grid";
  }
  r.inputs = {{"deltas", deltas}, {"lambdas", lambdas}, {"lambda_grid", limit.lambdas}};
  return r;
}

StationaryProfile with_fixed_opponent(const StationaryProfile& profile,
                                      std::size_t action) {
  StationaryProfile p = profile;
  for (MixedAction& y : p.x2) {
    if (action >= static_cast<std::size_t>(y.size())) {
      throw ValidationError({"opponent action index out of range"});
    }
    y.setZero();
    y(static_cast<Index>(action)) = 1.0;
  }
  return p;
}

std::vector<CpReport> run_verification(const GameSpec& spec,
                                       const VerifiedLimit& v,
                                       const VerifyOptions& o) {
  const ProfileLimit& lim = v.limit;
  const LimitDecomposition& d = v.decomposition;
  const double tol_id = identity_tolerance(lim);
  const std::size_t K = spec.num_states();
  std::vector<std::function<CpReport()>> jobs = {
      [&] { return verify_weak_cp(spec, lim, o.lambda_eval, o.t_grid, o.eps, o.tol); },
      [&] { return check_constancy(lim); },
      [&] { return check_invariance(lim, d, o.t_grid, tol_id); },
      [&] { return check_cycle_values(lim, d, tol_id); },
      [&] { return check_limit_shapley(lim, d, o.t_grid, tol_id); },
      [&] { return check_payoff_rate(lim, d, o.t_grid, tol_id); },
      [&] { return check_martingale(lim, d, o.t_grid, tol_id); },
      [&] { return check_truncated_profile(spec, lim, o.lambda_eval, o.t_grid, o.eps); },
  };
  for (std::size_t k = 0; k < K; ++k) {
    jobs.push_back([&, k] {
      return aux_payoff_scan(spec, lim, k, o.aux_deltas, o.aux_lambdas, o.eps, o.tol);
    });
  }
  std::vector<CpReport> out(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) { out[i] = jobs[i](); });
  std::stable_sort(out.begin(), out.end(),
                   [](const CpReport& a, const CpReport& b) { return a.check < b.check; });
  return out;
}

}  // namespace dglab
