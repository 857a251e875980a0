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
#include <sstream>

#include "dglab/errors.hpp"
#include "dglab/game_model.hpp"

namespace dglab {
namespace {

void sort_decreasing(std::vector<std::pair<double, double>>* s) {
  std::sort(s->begin(), s->end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

bool snap_rational(double x, int n_max, double window, Rational* out) {
  for (int q = 1; q <= n_max; ++q) {
    double p = std::round(x * q);
    if (std::abs(x - p / q) <= window) {
      *out = Rational(static_cast<std::int64_t>(p), q);
      return true;
    }
  }
  return false;
}

LeadingTermFit fit_leading_terms(std::vector<std::pair<double, double>> samples,
                                 int max_denominator) {
  if (samples.size() < 4) {
    throw FitRejected("fit_leading_terms: need at least 4 samples");
  }
  sort_decreasing(&samples);
  const std::size_t n = samples.size();
  const std::size_t tail_len = (n + 1) / 2;
  std::vector<std::pair<double, double>> tail(samples.end() - tail_len,
                                              samples.end());

  std::size_t zeros = 0;
  for (const auto& [l, f] : tail) {
    if (!(l > 0.0)) throw FitRejected("fit_leading_terms: lambda must be positive");
    if (std::abs(f) <= kStructuralZero) ++zeros;
  }
  LeadingTermFit fit;
  if (zeros == tail_len) {
    fit.zero = true;
    return fit;
  }
  if (zeros > 0) {
    throw FitRejected("fit_leading_terms: family vanishes on part of the tail");
  }
  const double sign = tail.front().second > 0 ? 1.0 : -1.0;
  for (const auto& [l, f] : tail) {
    if (f * sign <= 0.0) throw FitRejected("fit_leading_terms: sign change on the tail");
  }

  double mx = 0.0, my = 0.0;
  for (const auto& [l, f] : tail) {
    mx += std::log(l);
    my += std::log(std::abs(f));
  }
  mx /= tail_len;
  my /= tail_len;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [l, f] : tail) {
    double dx = std::log(l) - mx;
    sxy += dx * (std::log(std::abs(f)) - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) throw FitRejected("fit_leading_terms: degenerate lambda grid");
  const double slope = sxy / sxx;

  Rational e;
  if (!snap_rational(slope, max_denominator, 0.25 / max_denominator, &e)) {
    throw FitRejected("fit_leading_terms: slope " + fmt(slope) +
                      " not within reach of a rational with denominator <= " +
                      std::to_string(max_denominator));
  }
  if (e < Rational(0)) {
    throw FitRejected("fit_leading_terms: negative exponent " + e.str());
  }
  const double ed = e.to_double();
  // The ratios f / lambda^e converge to the coefficient; extrapolate them
  // rather than average, since the correction terms can be large on the tail.
  std::vector<std::pair<double, double>> ratios;
  for (const auto& [l, f] : tail) ratios.emplace_back(l, f / std::pow(l, ed));
  fit.coefficient = ratios.back().second;
  if (ratios.size() >= 5) {
    try {
      double c = extrapolate_limit(ratios, max_denominator).limit;
      if (c * sign > 0.0 && std::abs(c / fit.coefficient - 1.0) < 0.5) fit.coefficient = c;
    } catch (const NumericError&) {
      // keep the last ratio
    }
  }
  fit.exponent = e;
  fit.denominator = e.den();
  for (const auto& [l, f] : tail) {
    fit.fit_error = std::max(
        fit.fit_error, std::abs(f / (fit.coefficient * std::pow(l, ed)) - 1.0));
  }
  if (e > Rational(0)) {
    for (std::size_t i = 1; i < tail_len; ++i) {
      if (!(std::abs(tail[i].second) < std::abs(tail[i - 1].second))) {
        throw FitRejected("fit_leading_terms: |value| not monotone on the tail");
      }
    }
  }
  if (fit.fit_error > 0.5) {
    throw FitRejected("fit_leading_terms: tail deviates by " +
                      fmt(fit.fit_error) + " from a single leading term");
  }
  return fit;
}

StationaryProfile truncate_profile(const ProfileFits& fits, double lambda) {
  auto build = [lambda](const std::vector<LeadingTermFit>& row,
                        const std::string& who) {
    MixedAction x(static_cast<Eigen::Index>(row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) {
      const LeadingTermFit& f = row[i];
      if (f.zero) {
        x(i) = 0.0;
        continue;
      }
      if (!(f.coefficient > 0.0)) {
        throw ValidationError({"malformed fits: nonpositive coefficient in " + who});
      }
      x(i) = f.coefficient * std::pow(lambda, f.exponent.to_double());
    }
    double s = x.sum();
    if (!(s > 0.0)) throw ValidationError({"malformed fits: all-zero row " + who});
    return MixedAction(x / s);
  };
  StationaryProfile p;
  for (std::size_t k = 0; k < fits.x1.size(); ++k) {
    p.x1.push_back(build(fits.x1[k], "x1[" + std::to_string(k) + "]"));
  }
  for (std::size_t k = 0; k < fits.x2.size(); ++k) {
    p.x2.push_back(build(fits.x2[k], "x2[" + std::to_string(k) + "]"));
  }
  return p;
}

namespace {

// Least squares of f = a + b * lambda^e; returns a and the max residual.
std::pair<double, double> fit_offset(
    const std::vector<std::pair<double, double>>& pts, double e) {
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [l, f] : pts) {
    double x = std::pow(l, e);
    sx += x;
    sy += f;
    sxx += x * x;
    sxy += x * f;
  }
  double det = n * sxx - sx * sx;
  double a, b;
  if (std::abs(det) <= 1e-300) {
    a = sy / n;
    b = 0.0;
  } else {
    b = (n * sxy - sx * sy) / det;
    a = (sy - b * sx) / n;
  }
  double res = 0.0;
  for (const auto& [l, f] : pts) res = std::max(res, std::abs(a + b * std::pow(l, e) - f));
  return {a, res};
}

}  // namespace

Extrapolation extrapolate_limit(std::vector<std::pair<double, double>> samples,
                                int max_denominator) {
  if (samples.size() < 5) {
    throw FitRejected("extrapolate_limit: need at least 5 samples");
  }
  sort_decreasing(&samples);
  const std::size_t n = samples.size();
  const std::size_t tail_len = std::max<std::size_t>((n + 1) / 2, 3);
  std::vector<std::pair<double, double>> tail(samples.end() - tail_len,
                                              samples.end());
  const double last = samples.back().second;
  double spread = 0.0;
  for (const auto& [l, f] : tail) spread = std::max(spread, std::abs(f - last));

  Extrapolation out;
  out.limit = last;
  out.error = spread + 1e-13 * (1.0 + std::abs(last));
  if (spread <= 1e-12 * (1.0 + std::abs(last))) return out;

  std::vector<std::pair<double, double>> diffs;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    diffs.emplace_back(samples[i].first, samples[i].second - samples[i + 1].second);
  }
  LeadingTermFit d;
  try {
    d = fit_leading_terms(diffs, max_denominator);
  } catch (const FitRejected&) {
    return out;  // no clean power law: report the raw tail spread
  }
  if (d.zero || !(d.exponent > Rational(0))) return out;
  const double e = d.exponent.to_double();
  auto [a_all, res_all] = fit_offset(tail, e);
  std::vector<std::pair<double, double>> inner(tail.begin() + 1, tail.end());
  auto [a_inner, res_inner] = fit_offset(inner, e);
  out.limit = a_all;
  out.exponent = d.exponent;
  out.error = std::abs(a_all - a_inner) + res_all + 1e-13 * (1.0 + std::abs(a_all));
  return out;
}

}  // namespace dglab
