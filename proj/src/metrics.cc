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

#include "desense/metrics.h"

#include <string>

#include "desense/error.h"

namespace desense {
namespace {

void check_lengths(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) {
    throw DataError("prediction length " + std::to_string(pred.size()) +
                    " does not match truth length " + std::to_string(truth.size()));
  }
  if (truth.empty()) throw DataError("accuracy of an empty sample");
}

}  // namespace

double accuracy(std::span<const int> pred, std::span<const int> truth) {
  check_lengths(pred, truth);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += pred[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::vector<double> per_class_accuracy(std::span<const int> pred, std::span<const int> truth,
                                       int num_classes) {
  check_lengths(pred, truth);
  std::vector<double> hits(static_cast<std::size_t>(num_classes), 0.0);
  std::vector<double> totals(hits.size(), 0.0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= num_classes) throw DataError("class index out of range");
    const auto c = static_cast<std::size_t>(truth[i]);
    totals[c] += 1.0;
    if (pred[i] == truth[i]) hits[c] += 1.0;
  }
  for (std::size_t c = 0; c < hits.size(); ++c) hits[c] = totals[c] > 0 ? hits[c] / totals[c] : 0.0;
  return hits;
}

}  // namespace desense
