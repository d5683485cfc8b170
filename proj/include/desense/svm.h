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

#ifndef DESENSE_SVM_H_
#define DESENSE_SVM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "desense/matrix.h"

namespace desense {

struct SvmOptions {
  double tolerance = 1e-3;  // stop once max |projected gradient| < tolerance
  int max_passes = 1000;
  int threads = 1;          // one-vs-rest problems trained concurrently
  std::uint64_t seed = 1;   // visiting order of the coordinate sweeps
};

// One binary L2-regularized hinge-loss problem on bias-augmented features.
struct BinarySvmSolution {
  std::vector<double> weights;  // d + 1, bias last
  std::vector<double> alpha;    // dual variables, in [0, C]
  double dual_objective = 0.0;  // 1/2 ||w||^2 - sum(alpha), minimized
  int passes = 0;
  bool converged = false;
};

// Dual coordinate descent. `signs` holds +1/-1 per row of `x`.
BinarySvmSolution train_binary_svm(const Matrix& x, std::span<const int> signs, double c,
                                   const SvmOptions& options = {}, std::uint64_t stream = 0);

// One-vs-rest linear SVM.
struct LinearSvmModel {
  Matrix weights;  // L x (d+1)
  double c = 1.0;
  int num_classes = 0;

  std::size_t input_dims() const { return weights.cols() == 0 ? 0 : weights.cols() - 1; }
};

// Throws DataError when a class has no samples or N < L, ConfigError for
// C <= 0, and NumericalError for non-finite features.
LinearSvmModel train_linear_svm(const Matrix& x, std::span<const int> y, int num_classes,
                                double c, const SvmOptions& options = {});

// N x L decision values.
Matrix decision_values(const LinearSvmModel& model, const Matrix& x);

// Arg-max decision value per row, ties to the lowest class index.
std::vector<int> predict(const LinearSvmModel& model, const Matrix& x);

}  // namespace desense

#endif  // DESENSE_SVM_H_
