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

#ifndef DESENSE_RDCA_H_
#define DESENSE_RDCA_H_

#include <span>
#include <string>
#include <vector>

#include "desense/dataset.h"
#include "desense/matrix.h"

namespace desense {

// Scatter decomposition of a labeled sample, unnormalized (class-count
// weighted).
struct ScatterSet {
  Matrix between;  // S_B = sum_l N_l (mu_l - mu)(mu_l - mu)^T
  Matrix within;   // S_W = sum_l sum_{i in l} (x_i - mu_l)(x_i - mu_l)^T
  Matrix total;    // S_T = S_B + S_W
  std::vector<double> global_mean;
  Matrix class_means;  // L x M
  std::vector<std::size_t> class_counts;
};

// Throws DataError for N < 2, fewer than two classes, a class index out of
// range, or a class with no samples.
ScatterSet compute_scatter(const Matrix& x, std::span<const int> y, int num_classes);

// trace(S_T) without forming S_T.
double total_scatter_trace(const Matrix& x);

// Ridge discriminant components of one label.
struct RdcaModel {
  std::vector<double> mean;  // training global mean, length M
  Matrix components;         // M x M, column i is w_i
  std::vector<double> powers;  // discriminant power of w_i, descending
  int num_classes = 0;
  double ridge = 0.0;
  std::string label_name;
  std::vector<std::string> class_names;

  std::size_t dims() const { return mean.size(); }
  // Components with index < signal_dims() span the signal subspace.
  std::size_t signal_dims() const;
};

// Maximizes w^T S_B w subject to w^T (S_T + ridge I) w = 1, sequentially.
//
// With C = S_T + ridge*I = L L^T, the whitened between-class scatter
// K = L^-1 S_B L^-T is symmetrized and eigendecomposed; w_i = L^-T v_i.
// Throws NumericalError suggesting a larger ridge when C is not positive
// definite, and ConfigError for a negative ridge.
RdcaModel fit_rdca(const Matrix& x, std::span<const int> y, int num_classes, double ridge);
RdcaModel fit_rdca(const Dataset& ds, const std::string& label, double ridge);

enum class SubspaceKind { kSignal, kNoise, kFull };

const char* to_string(SubspaceKind kind);
// Throws ConfigError for anything but "signal", "noise" or "full".
SubspaceKind subspace_kind_from_string(const std::string& s);

// A centered linear map onto a contiguous run of RDCA components.
struct SubspaceProjection {
  Matrix basis;  // M x d
  SubspaceKind kind = SubspaceKind::kFull;
  std::vector<double> mean;
  std::string source_label;

  std::size_t input_dims() const { return basis.rows(); }
  std::size_t output_dims() const { return basis.cols(); }
};

// First L-1 components.
SubspaceProjection signal_subspace(const RdcaModel& model);
// Components L-1 .. M-1: the desensitized subspace.
SubspaceProjection noise_subspace(const RdcaModel& model);
// All M components in power order.
SubspaceProjection full_projection(const RdcaModel& model);
SubspaceProjection make_subspace(const RdcaModel& model, SubspaceKind kind);

// (X - 1 mean^T) * basis. Throws NumericalError on a column mismatch.
Matrix project(const Matrix& x, const SubspaceProjection& sub);

}  // namespace desense

#endif  // DESENSE_RDCA_H_
