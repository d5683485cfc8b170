// Copyright 2026 The Desense Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DESENSE_TESTS_ORACLES_H_
#define DESENSE_TESTS_ORACLES_H_

// Brute-force reference computations used only by tests. Nothing here calls
// into the library's factorizations or solvers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace desense::testing {

using Dense = std::vector<std::vector<double>>;

// Number of negative eigenvalues of the symmetric matrix `a` via the signs
// of the pivots of an unpivoted symmetric elimination (Sylvester's law of
// inertia). Exact zero pivots are nudged, which moves the count by at most
// the multiplicity of an eigenvalue sitting exactly at the shift.
inline int negative_inertia(Dense a) {
  const std::size_t n = a.size();
  std::vector<std::vector<long double>> m(n, std::vector<long double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
  int negatives = 0;
  for (std::size_t k = 0; k < n; ++k) {
    long double pivot = m[k][k];
    if (pivot == 0.0L) pivot = 1e-300L;
    if (pivot < 0) ++negatives;
    for (std::size_t i = k + 1; i < n; ++i) {
      const long double factor = m[i][k] / pivot;
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] -= factor * m[k][j];
    }
  }
  return negatives;
}

// Eigenvalues (descending) of the symmetric pencil (a, b) with b positive
// definite: count(lambda) = #negative eigenvalues of a - lambda*b is
// monotone in lambda, so every eigenvalue is found by bisection on it.
inline std::vector<double> pencil_eigenvalues(const Dense& a, const Dense& b, double lo,
                                              double hi, double tol = 1e-13) {
  const std::size_t n = a.size();
  auto count_below = [&](double x) {
    Dense s(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s[i][j] = a[i][j] - x * b[i][j];
    // eigenvalues of the pencil below x <=> positive eigenvalues of b*x - a
    // <=> negative eigenvalues of a - x*b.
    return negative_inertia(s);
  };
  std::vector<double> values;
  for (std::size_t k = 0; k < n; ++k) {
    // k-th smallest: smallest x with count_below(x) > k.
    double l = lo, h = hi;
    for (int it = 0; it < 200 && h - l > tol * std::max(1.0, std::abs(h)); ++it) {
      const double mid = 0.5 * (l + h);
      if (count_below(mid) > static_cast<int>(k)) h = mid; else l = mid;
    }
    values.push_back(0.5 * (l + h));
  }
  std::sort(values.rbegin(), values.rend());
  return values;
}

inline std::vector<double> symmetric_eigenvalues(const Dense& a) {
  const std::size_t n = a.size();
  Dense id(n, std::vector<double>(n, 0.0));
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    id[i][i] = 1.0;
    double row = 0.0;
    for (double v : a[i]) row += std::abs(v);
    bound = std::max(bound, row);  // Gershgorin
  }
  return pencil_eigenvalues(a, id, -bound - 1.0, bound + 1.0);
}

inline Dense random_symmetric(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Dense a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) a[i][j] = a[j][i] = u(rng);
  return a;
}

// Textbook Cholesky-Banachiewicz in long double; lower factor.
inline Dense cholesky_oracle(const Dense& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<long double>> l(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      long double sum = a[i][j];
      for (std::size_t k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
      l[i][j] = i == j ? std::sqrt(sum) : sum / l[j][j];
    }
  }
  Dense out(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = static_cast<double>(l[i][j]);
  return out;
}

// Minimizes f(a) = 1/2 a^T Q a - sum(a) over the box [0, C]^n by enumerating
// every assignment of each coordinate to {lower bound, upper bound, free}
// and solving the stationarity system for the free block. For a convex QP
// some optimum has a nonsingular free block, so this is exhaustive.
inline double brute_force_box_qp(const Dense& q, double c) {
  const std::size_t n = q.size();
  std::size_t combos = 1;
  for (std::size_t i = 0; i < n; ++i) combos *= 3;
  double best = INFINITY;
  std::vector<int> state(n);
  for (std::size_t code = 0; code < combos; ++code) {
    std::size_t t = code;
    for (std::size_t i = 0; i < n; ++i) { state[i] = static_cast<int>(t % 3); t /= 3; }
    std::vector<double> a(n, 0.0);
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] == 1) a[i] = c;
      if (state[i] == 2) free.push_back(i);
    }
    const std::size_t f = free.size();
    if (f > 0) {
      // Q_FF a_F = 1 - Q_FB a_B, Gaussian elimination with partial pivoting.
      std::vector<std::vector<double>> m(f, std::vector<double>(f + 1));
      for (std::size_t r = 0; r < f; ++r) {
        double rhs = 1.0;
        for (std::size_t j = 0; j < n; ++j)
          if (state[j] != 2) rhs -= q[free[r]][j] * a[j];
        for (std::size_t cc = 0; cc < f; ++cc) m[r][cc] = q[free[r]][free[cc]];
        m[r][f] = rhs;
      }
      bool singular = false;
      for (std::size_t k = 0; k < f && !singular; ++k) {
        std::size_t p = k;
        for (std::size_t r = k + 1; r < f; ++r)
          if (std::abs(m[r][k]) > std::abs(m[p][k])) p = r;
        if (std::abs(m[p][k]) < 1e-10) { singular = true; break; }
        std::swap(m[p], m[k]);
        for (std::size_t r = 0; r < f; ++r) {
          if (r == k) continue;
          const double factor = m[r][k] / m[k][k];
          for (std::size_t cc = k; cc <= f; ++cc) m[r][cc] -= factor * m[k][cc];
        }
      }
      if (singular) continue;
      bool feasible = true;
      for (std::size_t r = 0; r < f; ++r) {
        const double v = m[r][f] / m[r][r];
        if (v < -1e-12 || v > c + 1e-12) { feasible = false; break; }
        a[free[r]] = std::clamp(v, 0.0, c);
      }
      if (!feasible) continue;
    }
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) obj += 0.5 * a[i] * q[i][j] * a[j];
      obj -= a[i];
    }
    best = std::min(best, obj);
  }
  return best;
}

}  // namespace desense::testing

#endif  // DESENSE_TESTS_ORACLES_H_
