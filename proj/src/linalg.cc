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

#include "desense/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "desense/error.h"

namespace desense {
namespace {

// Hot kernels get an AVX2 clone picked at load time. The build disables
// floating-point contraction, so both clones produce the same bits.
#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__)
#define DESENSE_VECTOR_CLONES __attribute__((target_clones("avx2", "default")))
#else
#define DESENSE_VECTOR_CLONES
#endif

constexpr int kMaxQlIterations = 100;

void require_square(const Matrix& s, const char* op) {
  if (s.rows() != s.cols()) {
    throw NumericalError(std::string(op) + " needs a square matrix, got " + s.shape());
  }
}

// Four partial sums in a fixed order, so the loop vectorizes and the result
// does not depend on the build.
DESENSE_VECTOR_CLONES
double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < n; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

// Householder tridiagonalization (the EISPACK tred2 scheme). `u` holds the
// transpose of the working matrix so that every inner loop runs along a row.
// On return u's rows are the columns of the accumulated orthogonal
// transform, d the diagonal and e the subdiagonal (e[0] = 0).
DESENSE_VECTOR_CLONES
void tridiagonalize(std::size_t n, std::vector<double>& u, std::vector<double>& d,
                    std::vector<double>& e) {
  auto U = [&](std::size_t col, std::size_t row) -> double& { return u[col * n + row]; };

  for (std::size_t j = 0; j < n; ++j) d[j] = U(j, n - 1);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = U(j, i - 1);
        U(j, i) = 0.0;
        U(i, j) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        U(i, j) = f;
        const double* col_j = &U(j, 0);
        g = e[j] + U(j, j) * f + dot(col_j + j + 1, d.data() + j + 1, i - j - 1);
        double* __restrict ek = e.data();
        for (std::size_t k = j + 1; k < i; ++k) ek[k] += col_j[k] * f;
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        double* __restrict col_j = &U(j, 0);
        for (std::size_t k = j; k + 1 <= i; ++k) col_j[k] -= (f * e[k] + g * d[k]);
        d[j] = U(j, i - 1);
        U(j, i) = 0.0;
      }
    }
    d[i] = h;
  }

  // Accumulate the transformations.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    U(i, n - 1) = U(i, i);
    U(i, i) = 1.0;
    const double h = d[i + 1];
    double* next = &U(i + 1, 0);
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = next[k] / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double* __restrict col_j = &U(j, 0);
        const double g = dot(next, col_j, i + 1);
        for (std::size_t k = 0; k <= i; ++k) col_j[k] -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) next[k] = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = U(j, n - 1);
    U(j, n - 1) = 0.0;
  }
  U(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Applies the plane rotations of one QL sweep, ii = m-1 down to l, each to
// rows (ii, ii+1) of u. Four consecutive rotations share a single pass over
// the columns with the common row carried in a register; every entry still
// sees the same operations in the same order as one rotation at a time.
DESENSE_VECTOR_CLONES
void apply_rotations(std::size_t n, std::vector<double>& u, const std::vector<double>& rc,
                     const std::vector<double>& rs, std::size_t l, std::size_t m) {
  std::size_t top = m;  // rotations top-1 ... l remain
  while (top >= l + 4) {
    const std::size_t i0 = top - 4;
    double* __restrict r0 = &u[i0 * n];
    double* __restrict r1 = &u[(i0 + 1) * n];
    double* __restrict r2 = &u[(i0 + 2) * n];
    double* __restrict r3 = &u[(i0 + 3) * n];
    double* __restrict r4 = &u[(i0 + 4) * n];
    const double c3 = rc[i0 + 3], s3 = rs[i0 + 3], c2 = rc[i0 + 2], s2 = rs[i0 + 2];
    const double c1 = rc[i0 + 1], s1 = rs[i0 + 1], c0 = rc[i0], s0 = rs[i0];
    for (std::size_t k = 0; k < n; ++k) {
      double carry = r4[k];
      double a = r3[k];
      r4[k] = s3 * a + c3 * carry;
      carry = c3 * a - s3 * carry;
      a = r2[k];
      r3[k] = s2 * a + c2 * carry;
      carry = c2 * a - s2 * carry;
      a = r1[k];
      r2[k] = s1 * a + c1 * carry;
      carry = c1 * a - s1 * carry;
      a = r0[k];
      r1[k] = s0 * a + c0 * carry;
      r0[k] = c0 * a - s0 * carry;
    }
    top = i0;
  }
  for (std::size_t ii = top; ii-- > l;) {
    double* __restrict a = &u[ii * n];
    double* __restrict b = &u[(ii + 1) * n];
    const double c = rc[ii], s = rs[ii];
    for (std::size_t k = 0; k < n; ++k) {
      const double t = b[k];
      b[k] = s * a[k] + c * t;
      a[k] = c * a[k] - s * t;
    }
  }
}

// Implicit QL on the tridiagonal (d, e), rotating the rows of `u` along.
void tridiagonal_ql(std::size_t n, std::vector<double>& u, std::vector<double>& d,
                    std::vector<double>& e) {
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  std::vector<double> rot_c(n), rot_s(n);
  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxQlIterations) {
          throw NumericalError("sym_eig did not converge for eigenvalue " +
                               std::to_string(l) + " after " +
                               std::to_string(kMaxQlIterations) + " iterations");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          rot_c[ii] = c;
          rot_s[ii] = s;
        }
        apply_rotations(n, u, rot_c, rot_s, l, m);
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

bool is_symmetric(const Matrix& s, double rel_tol) {
  if (s.rows() != s.cols()) return false;
  const double tol = rel_tol * s.max_abs();
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = i + 1; j < s.cols(); ++j)
      if (std::abs(s(i, j) - s(j, i)) > tol) return false;
  return true;
}

Matrix cholesky(const Matrix& s) {
  require_square(s, "cholesky");
  if (!is_symmetric(s)) throw NumericalError("cholesky input is not symmetric");
  const std::size_t n = s.rows();
  const double threshold = n == 0 ? 0.0 : 1e-12 * s.trace() / static_cast<double>(n);
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    auto lj = l.row(j);
    const double pivot = s(j, j) - dot(lj.data(), lj.data(), j);
    if (!(pivot > threshold)) {
      throw NumericalError("matrix is not positive definite: pivot " + std::to_string(j) +
                           " is " + std::to_string(pivot));
    }
    const double diag = std::sqrt(pivot);
    lj[j] = diag;
    for (std::size_t i = j + 1; i < n; ++i) {
      auto li = l.row(i);
      li[j] = (s(i, j) - dot(li.data(), lj.data(), j)) / diag;
    }
  }
  check_finite(l, "cholesky");
  return l;
}

Matrix solve_triangular(const Matrix& l, const Matrix& b, TriangularSide side) {
  require_square(l, "solve_triangular");
  if (l.rows() != b.rows()) {
    throw NumericalError("solve_triangular dimension mismatch: " + l.shape() + " vs " +
                         b.shape());
  }
  const std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (l(i, i) == 0.0) {
      throw NumericalError("singular triangular system: zero diagonal at " +
                           std::to_string(i));
    }
  }
  Matrix x = b;
  // Column panels keep the rows being updated in cache for wide right-hand
  // sides. Each column's arithmetic is the same for any panel width.
  constexpr std::size_t kPanel = 64;
  for (std::size_t c0 = 0; c0 < x.cols(); c0 += kPanel) {
    const std::size_t width = std::min(kPanel, x.cols() - c0);
    auto panel = [&](std::size_t r) { return x.row(r).data() + c0; };
    if (side == TriangularSide::kLower) {
      for (std::size_t i = 0; i < n; ++i) {
        double* __restrict xi = panel(i);
        const auto li = l.row(i);
        for (std::size_t k = 0; k < i; ++k) {
          const double lik = li[k];
          if (lik == 0.0) continue;
          const double* __restrict xk = panel(k);
          for (std::size_t c = 0; c < width; ++c) xi[c] -= lik * xk[c];
        }
        const double inv = 1.0 / li[i];
        for (std::size_t c = 0; c < width; ++c) xi[c] *= inv;
      }
    } else {
      // Once x_k is final, eliminate it from every earlier row; L is read
      // by rows.
      for (std::size_t k = n; k-- > 0;) {
        double* xk = panel(k);
        const auto lk = l.row(k);
        const double inv = 1.0 / lk[k];
        for (std::size_t c = 0; c < width; ++c) xk[c] *= inv;
        for (std::size_t i = 0; i < k; ++i) {
          const double lki = lk[i];
          if (lki == 0.0) continue;
          const double* __restrict src = xk;
          double* __restrict out = panel(i);
          for (std::size_t c = 0; c < width; ++c) out[c] -= lki * src[c];
        }
      }
    }
  }
  check_finite(x, "solve_triangular");
  return x;
}

SymmetricEigen sym_eig(const Matrix& s) {
  require_square(s, "sym_eig");
  if (!is_symmetric(s)) throw NumericalError("sym_eig input is not symmetric");
  const std::size_t n = s.rows();
  if (n == 0) return {{}, Matrix()};

  // The reduction reads the lower triangle; feed it the symmetric part.
  std::vector<double> u(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) u[i * n + j] = 0.5 * (s(i, j) + s(j, i));
  std::vector<double> d(n), e(n);
  tridiagonalize(n, u, d, e);
  tridiagonal_ql(n, u, d, e);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });

  SymmetricEigen out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    const double* vec = &u[order[c] * n];
    std::size_t arg = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (std::abs(vec[k]) > std::abs(vec[arg])) arg = k;
    const double sign = vec[arg] < 0 ? -1.0 : 1.0;
    out.values[c] = d[order[c]];
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, c) = sign * vec[k];
  }
  check_finite(out.vectors, "sym_eig");
  return out;
}

}  // namespace desense
