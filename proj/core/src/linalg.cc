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

#include "dglab/linalg.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "dglab/errors.hpp"

namespace dglab {

Matrix lu_solve(const Matrix& a, const Matrix& b) {
  Eigen::PartialPivLU<Matrix> lu(a);
  // rcond estimate is cheap at these sizes and catches exact singularity.
  double rc = lu.rcond();
  if (!(rc > 1e-300)) throw NumericError("singular linear system");
  return lu.solve(b);
}

Matrix discounted_system(const Matrix& q, double lambda) {
  const Eigen::Index n = q.rows();
  Matrix m = -(1.0 - lambda) * q;
  for (Eigen::Index k = 0; k < n; ++k) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != k) off += q(k, j);
    }
    m(k, k) = lambda + (1.0 - lambda) * off;
  }
  return m;
}

Matrix matrix_power(const Matrix& a, std::uint64_t n) {
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix base = a;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return result;
}

Matrix expm(const Matrix& a) { return a.exp(); }

Matrix absorption_probabilities(const Matrix& transient,
                                const Matrix& absorbing) {
  const Eigen::Index n = transient.rows();
  const Eigen::Index m = absorbing.cols();
  Matrix out = Matrix::Zero(n, m);
  for (Eigen::Index s = 0; s < n; ++s) {
    // Working copy: columns [0, n) transient, [n, n+m) targets, n+m lost.
    Matrix p = Matrix::Zero(n, n + m + 1);
    p.leftCols(n) = transient;
    p.middleCols(n, m) = absorbing;
    for (Eigen::Index i = 0; i < n; ++i) p(i, i) = 0.0;
    std::vector<bool> alive(n, true);
    for (Eigen::Index j = n - 1; j >= 0; --j) {
      if (j == s) continue;
      double out_mass = 0.0;
      for (Eigen::Index x = 0; x < n + m + 1; ++x) {
        if (x == j || (x < n && !alive[x])) continue;
        out_mass += p(j, x);
      }
      alive[j] = false;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!alive[i] || p(i, j) == 0.0) continue;
        double w = p(i, j);
        p(i, j) = 0.0;
        if (out_mass <= 0.0) {
          p(i, n + m) += w;
          continue;
        }
        for (Eigen::Index x = 0; x < n + m + 1; ++x) {
          if (x == j || x == i || (x < n && !alive[x])) continue;
          p(i, x) += w * p(j, x) / out_mass;
        }
      }
    }
    double total = p.row(s).segment(n, m + 1).sum();
    if (total > 0.0) out.row(s) = p.row(s).segment(n, m) / total;
  }
  return out;
}

Vector stationary_distribution(const Matrix& p_in) {
  const Eigen::Index n = p_in.rows();
  Matrix p = p_in;
  Vector s = Vector::Zero(n);
  for (Eigen::Index k = n - 1; k >= 1; --k) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) sum += p(k, j);
    if (!(sum > 0.0)) throw NumericError("stationary_distribution: reducible chain");
    s(k) = sum;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (p(i, k) == 0.0) continue;
      for (Eigen::Index j = 0; j < k; ++j) p(i, j) += p(i, k) * p(k, j) / sum;
    }
  }
  Vector pi = Vector::Zero(n);
  pi(0) = 1.0;
  for (Eigen::Index k = 1; k < n; ++k) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) acc += pi(i) * p(i, k);
    pi(k) = acc / s(k);
  }
  return pi / pi.sum();
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n,
                                                                    double a,
                                                                    double b) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double half = 0.5 * (b - a), mid = 0.5 * (b + a);
    double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x[i] = mid - half * z;
    x[n - 1 - i] = mid + half * z;
    w[i] = w[n - 1 - i] = half * wi;
  }
  return {x, w};
}

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<Vector(double)>& f, double a, double b,
          Vector* result, double* err) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Vector fc = f(c);
  Vector kron = fc * kWgk[7];
  Vector gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    Vector f1 = f(c - h * kXgk[j]);
    Vector f2 = f(c + h * kXgk[j]);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  *result = kron * h;
  *err = ((kron - gauss) * h).cwiseAbs().maxCoeff();
}

Vector adapt(const std::function<Vector(double)>& f, double a, double b,
             double tol, int depth) {
  Vector r;
  double err;
  gk15(f, a, b, &r, &err);
  if (err <= tol || depth <= 0) return r;
  double m = 0.5 * (a + b);
  return adapt(f, a, m, 0.5 * tol, depth - 1) +
         adapt(f, m, b, 0.5 * tol, depth - 1);
}

}  // namespace

Vector integrate_adaptive(const std::function<Vector(double)>& f, double a,
                          double b, double tol, int max_depth) {
  if (a == b) return Vector::Zero(f(a).size());
  return adapt(f, a, b, tol, max_depth);
}

}  // namespace dglab
