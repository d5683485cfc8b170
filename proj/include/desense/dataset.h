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

#ifndef DESENSE_DATASET_H_
#define DESENSE_DATASET_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "desense/matrix.h"

namespace desense {

// Class assignment of every sample plus the ordered class-name table.
struct Label {
  std::vector<int> classes;
  std::vector<std::string> class_names;

  int num_classes() const { return static_cast<int>(class_names.size()); }
  friend bool operator==(const Label&, const Label&) = default;
};

struct Dataset {
  Matrix features;                      // N x M
  std::map<std::string, Label> labels;  // label name -> per-sample classes
  std::vector<std::string> sample_ids;  // empty or length N

  std::size_t num_samples() const { return features.rows(); }
  std::size_t num_features() const { return features.cols(); }

  // Throws DataError naming `name` when the label is absent.
  const Label& label(const std::string& name) const;

  // Rows in `indices`, with every label and sample id carried along. Class
  // tables are kept whole even if a class ends up empty.
  Dataset subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct SplitDataset {
  Dataset train;
  Dataset test;
};

// Checks lengths and class-index ranges. With `require_populated`, every
// label must also have >= 2 classes, each with at least one sample.
void validate(const Dataset& ds, bool require_populated = true);

// Shape and label-table agreement between the two sides.
void validate(const SplitDataset& split);

// Train and test stacked back into one dataset, train rows first.
Dataset concatenate(const SplitDataset& split);

inline constexpr const char* kRestClassName = "The Rest";

// Utility and privacy labels for the digit-grouping experiments.
//
// With protect_high, utility keeps digits 0-4 (classes 0..4) and folds 5-9
// into "The Rest" at index 5; privacy keeps 5-9 (classes 1..5) with "The
// Rest" at index 0. Clearing protect_high swaps the two assignments.
// Throws DataError for a digit outside 0-9.
std::pair<Label, Label> build_split_labels(std::span<const int> digits, bool protect_high);

// Stratified train/test split. For each class of `stratify_by`, round(n_c *
// test_fraction) samples go to the test side, chosen by a seeded shuffle.
// Throws ConfigError for a fraction outside (0, 1) and DataError when a
// class would leave either side empty.
SplitDataset stratified_split(const Dataset& ds, const std::string& stratify_by,
                              double test_fraction, std::uint64_t seed);

struct RandomGuess {
  std::vector<double> per_class;  // n_c / N
  double overall = 0.0;           // sum_c (n_c / N)^2
};

// Expected accuracy of a guesser that draws each prediction from the
// empirical class frequencies. `num_classes` defaults to max(class) + 1.
RandomGuess random_guess_accuracy(std::span<const int> classes, int num_classes = -1);

// Deterministic permutation of 0..n-1 driven by a 64-bit Mersenne twister.
// Kept independent of std::shuffle so splits match across standard libraries.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

}  // namespace desense

#endif  // DESENSE_DATASET_H_
