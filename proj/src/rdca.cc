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

#include "desense/rdca.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "desense/error.h"
#include "desense/linalg.h"

namespace desense {

ScatterSet compute_scatter(const Matrix& x, std::span<const int> y, int num_classes) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  if (n < 2) throw DataError("scatter needs at least 2 samples, got " + std::to_string(n));
  if (y.size() != n) {
    throw DataError("label has " + std::to_string(y.size()) + " entries for " +
                    std::to_string(n) + " samples");
  }
  if (num_classes < 2) throw DataError("scatter needs at least 2 classes");

  ScatterSet s;
  const auto classes = static_cast<std::size_t>(num_classes);
  s.class_counts.assign(classes, 0);
  s.class_means = Matrix(classes, m);
  s.global_mean.assign(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int c = y[i];
    if (c < 0 || c >= num_classes) {
      throw DataError("class index " + std::to_string(c) + " out of range at sample " +
                      std::to_string(i));
    }
    ++s.class_counts[static_cast<std::size_t>(c)];
    auto row = x.row(i);
    auto cm = s.class_means.row(static_cast<std::size_t>(c));
    for (std::size_t j = 0; j < m; ++j) {
      cm[j] += row[j];
      s.global_mean[j] += row[j];
    }
  }
  for (std::size_t c = 0; c < classes; ++c) {
    if (s.class_counts[c] == 0) {
      throw DataError("class " + std::to_string(c) + " has zero samples");
    }
    for (double& v : s.class_means.row(c)) v /= static_cast<double>(s.class_counts[c]);
  }
  for (double& v : s.global_mean) v /= static_cast<double>(n);

  Matrix centered(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = x.row(i);
    auto cm = s.class_means.row(static_cast<std::size_t>(y[i]));
    auto out = centered.row(i);
    for (std::size_t j = 0; j < m; ++j) out[j] = row[j] - cm[j];
  }
  s.within = gram(centered);

  s.between = Matrix(m, m);
  std::vector<double> dev(m);
  for (std::size_t c = 0; c < classes; ++c) {
    const double w = static_cast<double>(s.class_counts[c]);
    auto cm = s.class_means.row(c);
    for (std::size_t j = 0; j < m; ++j) dev[j] = cm[j] - s.global_mean[j];
    for (std::size_t i = 0; i < m; ++i) {
      const double wi = w * dev[i];
      if (wi == 0.0) continue;
      for (std::size_t j = i; j < m; ++j) s.between(i, j) += wi * dev[j];
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < i; ++j) s.between(i, j) = s.between(j, i);

  s.total = Matrix(m, m);
  for (std::size_t k = 0; k < m * m; ++k)
    s.total.mutable_data()[k] = s.between.data()[k] + s.within.data()[k];
  return s;
}

double total_scatter_trace(const Matrix& x) {
  const double n = static_cast<double>(x.rows());
  double t = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) mean += x(i, j);
    mean /= n;
    for (std::size_t i = 0; i < x.rows(); ++i) t += (x(i, j) - mean) * (x(i, j) - mean);
  }
  return t;
}

std::size_t RdcaModel::signal_dims() const {
  return std::min(dims(), static_cast<std::size_t>(std::max(num_classes - 1, 0)));
}

RdcaModel fit_rdca(const Matrix& x, std::span<const int> y, int num_classes, double ridge) {
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    throw ConfigError("ridge must be a finite value >= 0");
  }
  ScatterSet scatter = compute_scatter(x, y, num_classes);
  const std::size_t m = x.cols();

  Matrix c = scatter.total;
  for (std::size_t i = 0; i < m; ++i) c(i, i) += ridge;
  Matrix chol;
  try {
    chol = cholesky(c);
  } catch (const NumericalError& e) {
    std::ostringstream msg;
    msg << "S_T + ridge*I is not positive definite (" << e.what() << "); ridge " << ridge
        << " is too small for this data, try a larger ridge (e.g. 1e-3 * trace(S_T)/M = "
        << 1e-3 * scatter.total.trace() / static_cast<double>(m) << ")";
    throw NumericalError(msg.str());
  }

  // S_B = D D^T with column l of D = sqrt(N_l) (mu_l - mu), so
  // K = L^-1 S_B L^-T = B B^T with B = L^-1 D, an M x L solve.
  const std::size_t classes = scatter.class_counts.size();
  Matrix d(m, classes);
  for (std::size_t l = 0; l < classes; ++l) {
    const double w = std::sqrt(static_cast<double>(scatter.class_counts[l]));
    for (std::size_t j = 0; j < m; ++j)
      d(j, l) = w * (scatter.class_means(l, j) - scatter.global_mean[j]);
  }
  const Matrix k = gram(transpose(solve_triangular(chol, d, TriangularSide::kLower)));
  SymmetricEigen eig = sym_eig(k);

  RdcaModel model;
  model.mean = scatter.global_mean;
  model.components = solve_triangular(chol, eig.vectors, TriangularSide::kLowerTransposed);
  model.powers = std::move(eig.values);
  model.num_classes = num_classes;
  model.ridge = ridge;
  return model;
}

RdcaModel fit_rdca(const Dataset& ds, const std::string& label, double ridge) {
  const Label& lab = ds.label(label);
  RdcaModel model = fit_rdca(ds.features, lab.classes, lab.num_classes(), ridge);
  model.label_name = label;
  model.class_names = lab.class_names;
  return model;
}

const char* to_string(SubspaceKind kind) {
  switch (kind) {
    case SubspaceKind::kSignal: return "signal";
    case SubspaceKind::kNoise: return "noise";
    case SubspaceKind::kFull: return "full";
  }
  return "full";
}

SubspaceKind subspace_kind_from_string(const std::string& s) {
  if (s == "signal") return SubspaceKind::kSignal;
  if (s == "noise") return SubspaceKind::kNoise;
  if (s == "full") return SubspaceKind::kFull;
  throw ConfigError("unknown subspace '" + s + "' (expected signal, noise or full)");
}

SubspaceProjection make_subspace(const RdcaModel& model, SubspaceKind kind) {
  const std::size_t cut = model.signal_dims();
  SubspaceProjection sub;
  sub.kind = kind;
  sub.mean = model.mean;
  sub.source_label = model.label_name;
  switch (kind) {
    case SubspaceKind::kSignal: sub.basis = model.components.col_range(0, cut); break;
    case SubspaceKind::kNoise:
      sub.basis = model.components.col_range(cut, model.dims());
      break;
    case SubspaceKind::kFull: sub.basis = model.components; break;
  }
  return sub;
}

SubspaceProjection signal_subspace(const RdcaModel& model) {
  return make_subspace(model, SubspaceKind::kSignal);
}

SubspaceProjection noise_subspace(const RdcaModel& model) {
  return make_subspace(model, SubspaceKind::kNoise);
}

SubspaceProjection full_projection(const RdcaModel& model) {
  return make_subspace(model, SubspaceKind::kFull);
}

Matrix project(const Matrix& x, const SubspaceProjection& sub) {
  if (x.cols() != sub.input_dims() || sub.mean.size() != sub.input_dims()) {
    throw NumericalError("projection dimension mismatch: data " + x.shape() + ", basis " +
                         sub.basis.shape());
  }
  Matrix centered = x;
  for (std::size_t i = 0; i < centered.rows(); ++i) {
    auto row = centered.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] -= sub.mean[j];
  }
  return matmul(centered, sub.basis);
}

}  // namespace desense
