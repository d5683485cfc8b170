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

#include "desense/cross_validation.h"

#include <algorithm>
#include <string>

#include "desense/dataset.h"
#include "desense/error.h"
#include "desense/metrics.h"
#include "desense/parallel.h"

namespace desense {

std::vector<Fold> make_stratified_folds(std::span<const int> y, int num_classes, int folds,
                                        std::uint64_t seed) {
  const std::size_t n = y.size();
  if (folds < 2 || static_cast<std::size_t>(folds) > n) {
    throw DataError("cannot build " + std::to_string(folds) + " folds from " +
                    std::to_string(n) + " samples");
  }
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(num_classes));
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] < 0 || y[i] >= num_classes) throw DataError("class index out of range");
    members[static_cast<std::size_t>(y[i])].push_back(i);
  }
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (members[c].size() < 2) {
      throw DataError("fold construction impossible: class " + std::to_string(c) + " has " +
                      std::to_string(members[c].size()) + " sample(s)");
    }
  }

  std::vector<int> assignment(n);
  std::size_t dealt = 0;
  for (std::size_t c = 0; c < members.size(); ++c) {
    const auto perm = seeded_permutation(members[c].size(), seed + 0xA24BAED4963EE407ULL * (c + 1));
    for (std::size_t k : perm) {
      assignment[members[c][k]] = static_cast<int>(dealt % static_cast<std::size_t>(folds));
      ++dealt;
    }
  }
  std::vector<Fold> out(static_cast<std::size_t>(folds));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < out.size(); ++f) {
      (static_cast<int>(f) == assignment[i] ? out[f].validation : out[f].train).push_back(i);
    }
  }
  return out;
}

CvResult cross_validate(std::span<const int> y, int num_classes, const CvPlan& plan,
                        const CvPipeline& pipeline, int threads) {
  if (plan.c_grid.empty()) throw ConfigError("empty C grid");
  const std::vector<double> rhos = plan.rho_grid.empty() ? std::vector<double>{0.0} : plan.rho_grid;
  const auto folds = make_stratified_folds(y, num_classes, plan.folds, plan.seed);

  // accuracies[rho][fold][c]
  const std::size_t tasks = rhos.size() * folds.size();
  std::vector<std::vector<double>> fold_acc(tasks);
  parallel_for(tasks, threads, [&](std::size_t t) {
    const std::size_t r = t / folds.size();
    const Fold& fold = folds[t % folds.size()];
    const auto preds = pipeline(fold, rhos[r], plan.c_grid);
    if (preds.size() != plan.c_grid.size()) {
      throw ConfigError("pipeline returned " + std::to_string(preds.size()) +
                        " prediction sets for " + std::to_string(plan.c_grid.size()) + " C values");
    }
    std::vector<int> truth;
    truth.reserve(fold.validation.size());
    for (std::size_t i : fold.validation) truth.push_back(y[i]);
    for (const auto& p : preds) fold_acc[t].push_back(accuracy(p, truth));
  });

  CvResult result;
  for (std::size_t r = 0; r < rhos.size(); ++r) {
    for (std::size_t c = 0; c < plan.c_grid.size(); ++c) {
      double sum = 0.0;
      for (std::size_t f = 0; f < folds.size(); ++f) sum += fold_acc[r * folds.size() + f][c];
      result.scores.push_back({{plan.c_grid[c], rhos[r]}, sum / static_cast<double>(folds.size())});
    }
  }

  std::vector<const CvScore*> order;
  for (const auto& s : result.scores) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](const CvScore* a, const CvScore* b) {
    if (a->params.c != b->params.c) return a->params.c < b->params.c;
    return a->params.rho < b->params.rho;
  });
  const CvScore* best = order.front();
  for (const CvScore* s : order)
    if (s->mean_accuracy > best->mean_accuracy) best = s;
  result.best = best->params;
  return result;
}

CvPipeline svm_pipeline(const Matrix& x, std::span<const int> y, int num_classes,
                        const SvmOptions& options) {
  return [&x, y, num_classes, options](const Fold& fold, double,
                                       std::span<const double> c_grid) {
    const Matrix train_x = x.select_rows(fold.train);
    const Matrix val_x = x.select_rows(fold.validation);
    std::vector<int> train_y;
    for (std::size_t i : fold.train) train_y.push_back(y[i]);
    SvmOptions inner = options;
    inner.threads = 1;
    std::vector<std::vector<int>> out;
    for (double c : c_grid) {
      out.push_back(predict(train_linear_svm(train_x, train_y, num_classes, c, inner), val_x));
    }
    return out;
  };
}

}  // namespace desense
