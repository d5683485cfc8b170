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

#include "desense/dataset.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "desense/error.h"

namespace desense {

const Label& Dataset::label(const std::string& name) const {
  auto it = labels.find(name);
  if (it == labels.end()) {
    std::string known;
    for (const auto& [k, v] : labels) known += (known.empty() ? "" : ", ") + k;
    throw DataError("unknown label '" + name + "' (dataset has: " + known + ")");
  }
  return it->second;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.features = features.select_rows(indices);
  for (const auto& [name, lab] : labels) {
    Label sub{{}, lab.class_names};
    sub.classes.reserve(indices.size());
    for (std::size_t i : indices) sub.classes.push_back(lab.classes[i]);
    out.labels.emplace(name, std::move(sub));
  }
  if (!sample_ids.empty()) {
    for (std::size_t i : indices) out.sample_ids.push_back(sample_ids[i]);
  }
  return out;
}

void validate(const Dataset& ds, bool require_populated) {
  const std::size_t n = ds.num_samples();
  if (!ds.sample_ids.empty() && ds.sample_ids.size() != n) {
    throw DataError("sample id count " + std::to_string(ds.sample_ids.size()) +
                    " does not match " + std::to_string(n) + " samples");
  }
  for (const auto& [name, lab] : ds.labels) {
    if (lab.classes.size() != n) {
      throw DataError("label '" + name + "' has " + std::to_string(lab.classes.size()) +
                      " entries for " + std::to_string(n) + " samples");
    }
    std::vector<std::size_t> counts(lab.class_names.size(), 0);
    for (int c : lab.classes) {
      if (c < 0 || c >= lab.num_classes()) {
        throw DataError("label '" + name + "' has class index " + std::to_string(c) +
                        " outside its " + std::to_string(lab.num_classes()) + " classes");
      }
      ++counts[static_cast<std::size_t>(c)];
    }
    if (!require_populated) continue;
    if (lab.num_classes() < 2) {
      throw DataError("label '" + name + "' needs at least 2 classes");
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] == 0) {
        throw DataError("label '" + name + "' class '" + lab.class_names[c] +
                        "' has no samples");
      }
    }
  }
}

void validate(const SplitDataset& split) {
  if (split.train.num_features() != split.test.num_features()) {
    throw DataError("train has " + std::to_string(split.train.num_features()) +
                    " features but test has " + std::to_string(split.test.num_features()));
  }
  if (split.train.labels.size() != split.test.labels.size()) {
    throw DataError("train and test carry different label sets");
  }
  for (const auto& [name, lab] : split.train.labels) {
    auto it = split.test.labels.find(name);
    if (it == split.test.labels.end() || it->second.class_names != lab.class_names) {
      throw DataError("label '" + name + "' differs between train and test");
    }
  }
  validate(split.train, false);
  validate(split.test, false);
}

Dataset concatenate(const SplitDataset& split) {
  validate(split);
  const Dataset& a = split.train;
  const Dataset& b = split.test;
  std::vector<double> data = a.features.data();
  data.insert(data.end(), b.features.data().begin(), b.features.data().end());
  Dataset out;
  out.features = Matrix(a.num_samples() + b.num_samples(), a.num_features(), std::move(data));
  for (const auto& [name, lab] : a.labels) {
    Label merged = lab;
    const Label& other = b.labels.at(name);
    merged.classes.insert(merged.classes.end(), other.classes.begin(), other.classes.end());
    out.labels.emplace(name, std::move(merged));
  }
  if (!a.sample_ids.empty() && !b.sample_ids.empty()) {
    out.sample_ids = a.sample_ids;
    out.sample_ids.insert(out.sample_ids.end(), b.sample_ids.begin(), b.sample_ids.end());
  }
  return out;
}

std::pair<Label, Label> build_split_labels(std::span<const int> digits, bool protect_high) {
  // "low" keeps 0-4 and groups the rest at index 5; "high" keeps 5-9 at
  // indices 1..5 and groups the rest at index 0.
  Label low{{}, {"0", "1", "2", "3", "4", kRestClassName}};
  Label high{{}, {kRestClassName, "5", "6", "7", "8", "9"}};
  low.classes.reserve(digits.size());
  high.classes.reserve(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const int d = digits[i];
    if (d < 0 || d > 9) {
      throw DataError("digit class " + std::to_string(d) + " at sample " +
                      std::to_string(i) + " is outside 0-9");
    }
    low.classes.push_back(d <= 4 ? d : 5);
    high.classes.push_back(d >= 5 ? d - 4 : 0);
  }
  if (protect_high) return {std::move(low), std::move(high)};
  return {std::move(high), std::move(low)};
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    // Rejection sampling for an unbiased index in [0, i).
    const std::uint64_t bound = static_cast<std::uint64_t>(i);
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(p[i - 1], p[static_cast<std::size_t>(r % bound)]);
  }
  return p;
}

SplitDataset stratified_split(const Dataset& ds, const std::string& stratify_by,
                              double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test fraction must lie in (0, 1), got " +
                      std::to_string(test_fraction));
  }
  const Label& strat = ds.label(stratify_by);
  std::vector<std::vector<std::size_t>> members(strat.class_names.size());
  for (std::size_t i = 0; i < strat.classes.size(); ++i)
    members[static_cast<std::size_t>(strat.classes[i])].push_back(i);

  std::vector<std::size_t> train_idx, test_idx;
  for (std::size_t c = 0; c < members.size(); ++c) {
    const auto& m = members[c];
    const auto n_test =
        static_cast<std::size_t>(std::llround(static_cast<double>(m.size()) * test_fraction));
    if (n_test == 0 || n_test >= m.size()) {
      throw DataError("class '" + strat.class_names[c] + "' of label '" + stratify_by +
                      "' has " + std::to_string(m.size()) +
                      " samples, too few to split at test fraction " +
                      std::to_string(test_fraction));
    }
    const auto perm = seeded_permutation(m.size(), seed + 0x9E3779B97F4A7C15ULL * (c + 1));
    for (std::size_t k = 0; k < m.size(); ++k) {
      (k < n_test ? test_idx : train_idx).push_back(m[perm[k]]);
    }
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {ds.subset(train_idx), ds.subset(test_idx)};
}

RandomGuess random_guess_accuracy(std::span<const int> classes, int num_classes) {
  if (classes.empty()) throw DataError("random guess needs a nonempty label");
  if (num_classes < 0) num_classes = *std::max_element(classes.begin(), classes.end()) + 1;
  std::vector<double> counts(static_cast<std::size_t>(num_classes), 0.0);
  for (int c : classes) {
    if (c < 0 || c >= num_classes) throw DataError("class index out of range");
    counts[static_cast<std::size_t>(c)] += 1.0;
  }
  RandomGuess out;
  const double n = static_cast<double>(classes.size());
  for (double k : counts) {
    out.per_class.push_back(k / n);
    out.overall += (k / n) * (k / n);
  }
  return out;
}

}  // namespace desense
