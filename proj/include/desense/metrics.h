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

#ifndef DESENSE_METRICS_H_
#define DESENSE_METRICS_H_

#include <span>
#include <vector>

namespace desense {

// Fraction of positions where pred == truth. Throws DataError on a length
// mismatch or empty input.
double accuracy(std::span<const int> pred, std::span<const int> truth);

// Recall per class: correct predictions among samples whose truth is c.
// A class with no samples reports 0.
std::vector<double> per_class_accuracy(std::span<const int> pred, std::span<const int> truth,
                                       int num_classes);

}  // namespace desense

#endif  // DESENSE_METRICS_H_
