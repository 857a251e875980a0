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

std::string describe(const Matrix& a) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (Eigen::Index j = 0; j < a.cols(); ++j) os << (j ? "," : "") << a(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

void clean_distribution(Vector* x) {
  for (Eigen::Index i = 0; i < x->size(); ++i) {
    if ((*x)(i) < 1e-15) (*x)(i) = 0.0;
  }
  *x /= x->sum();
}

}  // namespace

// Column player's program on the rescaled matrix B in [1,2]:
//   max sum(y)  s.t.  B y <= 1, y >= 0,
// solved by a dense tableau simplex with Bland's rule. Duals of the rows give
// the row player's strategy.
MatrixGameSolution solve_matrix_game(const Matrix& a, double tol) {
  const Eigen::Index m = a.rows(), n = a.cols();
  if (m == 0 || n == 0) throw NumericError("solve_matrix_game: empty matrix");
  if (!a.allFinite()) throw NumericError("solve_matrix_game: non-finite entry in " + describe(a));
  const double lo = a.minCoeff(), hi = a.maxCoeff();
  const double span = hi - lo;
  MatrixGameSolution sol;
  if (span <= 1e-300 || span <= 1e-15 * std::max(std::abs(lo), std::abs(hi))) {
    sol.value = lo;
    sol.row_strategy = Vector::Zero(m);
    sol.col_strategy = Vector::Zero(n);
    sol.row_strategy(0) = 1.0;
    sol.col_strategy(0) = 1.0;
    sol.guarantee_gap = span;
    return sol;
  }

  // Tableau rows 0..m-1 constraints, row m objective (reduced costs).
  // Columns 0..n-1 y, n..n+m-1 slacks, n+m right-hand side.
  const Eigen::Index cols = n + m + 1;
  Matrix t = Matrix::Zero(m + 1, cols);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) t(i, j) = (a(i, j) - lo) / span + 1.0;
    t(i, n + i) = 1.0;
    t(i, n + m) = 1.0;
  }
  for (Eigen::Index j = 0; j < n; ++j) t(m, j) = -1.0;
  std::vector<Eigen::Index> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = n + i;

  const int cap = 50 * static_cast<int>(m + n) + 100;
  int iter = 0;
  for (;; ++iter) {
    if (iter > cap) {
      throw NumericError("solve_matrix_game: simplex iteration cap exceeded for " + describe(a));
    }
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (t(m, j) < -1e-13) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (t(i, enter) <= 1e-12) continue;
      double ratio = t(i, n + m) / t(i, enter);
      if (leave < 0 || ratio < best - 1e-15 ||
          (ratio <= best + 1e-15 && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) {
      throw NumericError("solve_matrix_game: unbounded program for " + describe(a));
    }
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave || t(i, enter) == 0.0) continue;
      t.row(i) -= t(i, enter) * t.row(leave);
    }
    basis[leave] = enter;
  }

  Vector y = Vector::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] < n) y(basis[i]) = std::max(0.0, t(i, n + m));
  }
  Vector x(m);
  for (Eigen::Index i = 0; i < m; ++i) x(i) = std::max(0.0, t(m, n + i));
  if (!(y.sum() > 0.0) || !(x.sum() > 0.0)) {
    throw NumericError("solve_matrix_game: degenerate optimum for " + describe(a));
  }
  clean_distribution(&x);
  clean_distribution(&y);

  // Certified bounds on the original matrix.
  double lower = (x.transpose() * a).minCoeff();
  double upper = (a * y).maxCoeff();
  sol.value = 0.5 * (lower + upper);
  sol.row_strategy = x;
  sol.col_strategy = y;
  sol.guarantee_gap = std::max(0.0, 0.5 * (upper - lower));
  if (sol.guarantee_gap > tol * std::max(1.0, span)) {
    std::ostringstream os;
    os << "solve_matrix_game: guarantee gap " << sol.guarantee_gap
       << " exceeds tolerance for " << describe(a);
    throw NumericError(os.str());
  }
  return sol;
}

}  // namespace dglab
