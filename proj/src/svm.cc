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

#include "desense/svm.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "desense/dataset.h"
#include "desense/error.h"
#include "desense/parallel.h"

namespace desense {

BinarySvmSolution train_binary_svm(const Matrix& x, std::span<const int> signs, double c,
                                   const SvmOptions& options, std::uint64_t stream) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (signs.size() != n) throw DataError("sign vector does not match sample count");
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("SVM cost C must be > 0");

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    double q = 1.0;  // bias coordinate
    for (double v : x.row(i)) q += v * v;
    diag[i] = q;
  }

  BinarySvmSolution sol;
  sol.weights.assign(d + 1, 0.0);
  sol.alpha.assign(n, 0.0);
  std::vector<double>& w = sol.weights;
  std::vector<double>& alpha = sol.alpha;

  // Coordinates whose gradient points firmly out of the box are shrunk away
  // from the sweep; convergence is only declared after a full sweep.
  std::vector<std::size_t> index(n);
  for (std::size_t i = 0; i < n; ++i) index[i] = i;
  std::size_t active = n;
  double pg_max_old = INFINITY, pg_min_old = -INFINITY;
  std::mt19937_64 rng(options.seed ^ (stream * 0xD1B54A32D192ED03ULL));

  for (int pass = 0; pass < options.max_passes; ++pass) {
    for (std::size_t k = active; k > 1; --k) {
      std::swap(index[k - 1], index[static_cast<std::size_t>(rng() % k)]);
    }
    double pg_max = -INFINITY, pg_min = INFINITY;
    for (std::size_t s = 0; s < active; ++s) {
      const std::size_t idx = index[s];
      const auto xi = x.row(idx);
      const double yi = signs[idx];
      double margin = w[d];
      for (std::size_t j = 0; j < d; ++j) margin += w[j] * xi[j];
      const double grad = yi * margin - 1.0;

      double projected = 0.0;
      if (alpha[idx] == 0.0) {
        if (grad > pg_max_old) {
          std::swap(index[s--], index[--active]);
          continue;
        }
        projected = std::min(grad, 0.0);
      } else if (alpha[idx] == c) {
        if (grad < pg_min_old) {
          std::swap(index[s--], index[--active]);
          continue;
        }
        projected = std::max(grad, 0.0);
      } else {
        projected = grad;
      }
      pg_max = std::max(pg_max, projected);
      pg_min = std::min(pg_min, projected);
      if (projected == 0.0) continue;

      const double old = alpha[idx];
      alpha[idx] = std::clamp(old - grad / diag[idx], 0.0, c);
      const double step = (alpha[idx] - old) * yi;
      if (step == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) w[j] += step * xi[j];
      w[d] += step;
    }
    sol.passes = pass + 1;
    if (active == 0) {
      pg_max = 0.0;
      pg_min = 0.0;
    }
    if (std::max(pg_max, -pg_min) < options.tolerance) {
      if (active == n) {
        sol.converged = true;
        break;
      }
      active = n;
      pg_max_old = INFINITY;
      pg_min_old = -INFINITY;
      continue;
    }
    pg_max_old = pg_max > 0 ? pg_max : INFINITY;
    pg_min_old = pg_min < 0 ? pg_min : -INFINITY;
  }

  double norm = 0.0, sum = 0.0;
  for (double v : w) norm += v * v;
  for (double a : alpha) sum += a;
  sol.dual_objective = 0.5 * norm - sum;
  for (double v : w) {
    if (!std::isfinite(v)) throw NumericalError("SVM produced a non-finite weight");
  }
  return sol;
}

LinearSvmModel train_linear_svm(const Matrix& x, std::span<const int> y, int num_classes,
                                double c, const SvmOptions& options) {
  if (num_classes < 2) throw DataError("SVM needs at least 2 classes");
  if (y.size() != x.rows()) throw DataError("SVM labels do not match sample count");
  if (x.rows() < static_cast<std::size_t>(num_classes)) {
    throw DataError("SVM needs N >= L, got N=" + std::to_string(x.rows()));
  }
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("SVM cost C must be > 0");
  check_finite(x, "SVM features");

  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
  for (int v : y) {
    if (v < 0 || v >= num_classes) throw DataError("SVM class index out of range");
    ++counts[static_cast<std::size_t>(v)];
  }
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) throw DataError("SVM class " + std::to_string(k) + " is empty");
  }

  LinearSvmModel model;
  model.c = c;
  model.num_classes = num_classes;
  model.weights = Matrix(static_cast<std::size_t>(num_classes), x.cols() + 1);
  parallel_for(counts.size(), options.threads, [&](std::size_t k) {
    std::vector<int> signs(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
      signs[i] = y[i] == static_cast<int>(k) ? 1 : -1;
    const BinarySvmSolution sol = train_binary_svm(x, signs, c, options, k);
    std::copy(sol.weights.begin(), sol.weights.end(), model.weights.row(k).begin());
  });
  return model;
}

Matrix decision_values(const LinearSvmModel& model, const Matrix& x) {
  if (x.cols() != model.input_dims()) {
    throw NumericalError("SVM expects " + std::to_string(model.input_dims()) +
                         " features, got " + x.shape());
  }
  const std::size_t d = x.cols();
  Matrix out(x.rows(), static_cast<std::size_t>(model.num_classes));
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto xi = x.row(i);
    for (std::size_t k = 0; k < out.cols(); ++k) {
      const auto w = model.weights.row(k);
      double v = w[d];
      for (std::size_t j = 0; j < d; ++j) v += w[j] * xi[j];
      out(i, k) = v;
    }
  }
  return out;
}

std::vector<int> predict(const LinearSvmModel& model, const Matrix& x) {
  const Matrix scores = decision_values(model, x);
  std::vector<int> out(x.rows(), 0);
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    const auto s = scores.row(i);
    std::size_t best = 0;
    for (std::size_t k = 1; k < s.size(); ++k)
      if (s[k] > s[best]) best = k;
    out[i] = static_cast<int>(best);
  }
  return out;
}

}  // namespace desense
