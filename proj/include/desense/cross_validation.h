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

#ifndef DESENSE_CROSS_VALIDATION_H_
#define DESENSE_CROSS_VALIDATION_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "desense/matrix.h"
#include "desense/svm.h"

namespace desense {

struct CvPlan {
  int folds = 5;
  std::vector<double> c_grid = {0.01, 0.1, 1, 10, 100};
  // Absolute ridge values. Empty means the pipeline has no ridge to tune;
  // a single 0 is searched in that case.
  std::vector<double> rho_grid;
  std::uint64_t seed = 1;
};

struct Fold {
  std::vector<std::size_t> train;       // ascending row indices
  std::vector<std::size_t> validation;  // ascending row indices
};

// Stratified k-fold assignment: classes are shuffled with the seed, laid out
// class after class, and dealt round-robin onto the folds, so each fold holds
// floor or ceil of n_c / k samples of every class. Leave-one-out (k = N) is
// the limiting case. Throws DataError unless 2 <= k <= N and every class has
// at least 2 samples (otherwise a training side would lose a class).
std::vector<Fold> make_stratified_folds(std::span<const int> y, int num_classes, int folds,
                                        std::uint64_t seed);

// Fits on fold.train for one ridge value and returns validation predictions
// for every C of the grid, in grid order.
using CvPipeline = std::function<std::vector<std::vector<int>>(
    const Fold& fold, double rho, std::span<const double> c_grid)>;

struct CvParams {
  double c = 0.0;
  double rho = 0.0;
  friend bool operator==(const CvParams&, const CvParams&) = default;
};

struct CvScore {
  CvParams params;
  double mean_accuracy = 0.0;
};

struct CvResult {
  CvParams best;
  std::vector<CvScore> scores;  // rho-major, grid order
};

// Mean validation accuracy (averaged over folds) for every (rho, C) pair.
// The best pair has the highest mean; ties go to the smaller C, then the
// smaller rho. Fold x rho tasks run on up to `threads` workers and are
// reduced in a fixed order.
CvResult cross_validate(std::span<const int> y, int num_classes, const CvPlan& plan,
                        const CvPipeline& pipeline, int threads = 1);

// Plain SVM pipeline over the rows of `x`; the ridge is ignored.
CvPipeline svm_pipeline(const Matrix& x, std::span<const int> y, int num_classes,
                        const SvmOptions& options);

}  // namespace desense

#endif  // DESENSE_CROSS_VALIDATION_H_
