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

#ifndef DESENSE_LINALG_H_
#define DESENSE_LINALG_H_

#include <vector>

#include "desense/matrix.h"

namespace desense {

// Relative tolerance used to decide whether a matrix is symmetric:
// |S_ij - S_ji| <= kSymmetryTolerance * max|S|.
inline constexpr double kSymmetryTolerance = 1e-9;

bool is_symmetric(const Matrix& s, double rel_tol = kSymmetryTolerance);

// Lower-triangular L with L * L^T = S.
//
// Throws NumericalError when S is not square or not symmetric, and when a
// pivot falls to <= 1e-12 * trace(S) / n; the message names the pivot index.
Matrix cholesky(const Matrix& s);

enum class TriangularSide {
  kLower,            // solve L * X = B
  kLowerTransposed,  // solve L^T * X = B
};

// Forward or back substitution against the lower triangle of `l`.
// Throws NumericalError on a zero diagonal entry or a row-count mismatch.
Matrix solve_triangular(const Matrix& l, const Matrix& b, TriangularSide side);

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // column i pairs with values[i]
};

// Eigendecomposition of a symmetric matrix.
//
// Householder reduction to tridiagonal form followed by implicit QL with
// Wilkinson shifts. Eigenvalues come back sorted descending (stable for
// ties); each eigenvector is signed so that its largest-magnitude entry is
// positive, the lowest index winning ties. Output is a pure function of the
// input bits.
//
// Throws NumericalError for non-square or non-symmetric input, and when an
// eigenvalue fails to converge within the iteration cap.
SymmetricEigen sym_eig(const Matrix& s);

}  // namespace desense

#endif  // DESENSE_LINALG_H_
