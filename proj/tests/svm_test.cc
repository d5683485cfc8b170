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

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "desense/cross_validation.h"
#include "desense/error.h"
#include "desense/metrics.h"
#include "desense/model_io.h"
#include "desense/svm.h"
#include "oracles.h"

namespace desense {
namespace {

// One unit Gaussian blob per class around a random center.
struct Blobs {
  Matrix x;
  std::vector<int> y;
};

Blobs blobs(std::size_t n, std::size_t d, int classes, double separation, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> centers(static_cast<std::size_t>(classes),
                                           std::vector<double>(d));
  for (auto& c : centers)
    for (double& v : c) v = separation * g(rng);
  Blobs b{Matrix(n, d), {}};
  for (std::size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % static_cast<std::size_t>(classes));
    b.y.push_back(c);
    for (std::size_t j = 0; j < d; ++j) b.x(i, j) = centers[static_cast<std::size_t>(c)][j] + g(rng);
  }
  return b;
}

TEST(Metrics, HandCount) {
  // A = 0, B = 1.
  const std::vector<int> truth = {0, 0, 1}, pred = {0, 1, 1};
  EXPECT_DOUBLE_EQ(accuracy(pred, truth), 2.0 / 3.0);
  EXPECT_EQ(per_class_accuracy(pred, truth, 2), (std::vector<double>{0.5, 1.0}));
}

TEST(Metrics, IdentityAndAlwaysWrong) {
  const std::vector<int> truth = {0, 1, 0, 1}, wrong = {1, 0, 1, 0};
  EXPECT_EQ(accuracy(truth, truth), 1.0);
  EXPECT_EQ(per_class_accuracy(truth, truth, 2), (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(accuracy(wrong, truth), 0.0);
  // A class absent from the truth reports 0.
  EXPECT_EQ(per_class_accuracy(truth, truth, 3)[2], 0.0);
}

TEST(Metrics, LengthMismatch) {
  const std::vector<int> a = {0, 1}, b = {0};
  EXPECT_THROW(accuracy(a, b), DataError);
  EXPECT_THROW(per_class_accuracy(a, b, 2), DataError);
  EXPECT_THROW(accuracy(std::vector<int>{}, std::vector<int>{}), DataError);
}

TEST(Svm, SeparableOneDimensional) {
  const Matrix x = Matrix::FromRows({{-2}, {-1}, {1}, {2}});
  const std::vector<int> y = {0, 0, 1, 1};
  const LinearSvmModel model = train_linear_svm(x, y, 2, 10.0);
  EXPECT_EQ(predict(model, x), y);
  EXPECT_EQ(predict(model, Matrix::FromRows({{-5}, {5}, {0.3}})), (std::vector<int>{0, 1, 1}));
}

TEST(Svm, XorIsNotLinearlySeparable) {
  const Matrix x = Matrix::FromRows({{1, 1}, {-1, -1}, {1, -1}, {-1, 1}});
  const std::vector<int> y = {0, 0, 1, 1};
  for (double c : {0.01, 1.0, 100.0}) {
    const LinearSvmModel model = train_linear_svm(x, y, 2, c);
    EXPECT_LE(accuracy(predict(model, x), y), 0.75);
  }
}

TEST(SvmProperty, DualObjectiveMatchesBruteForce) {
  std::mt19937_64 rng(606);
  std::normal_distribution<double> g(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    const std::size_t d = 1 + rng() % 3;
    const double c = std::array<double, 4>{0.05, 0.5, 2.0, 20.0}[rng() % 4];
    Matrix x(n, d);
    std::vector<int> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = i % 2 ? 1 : -1;
      for (std::size_t j = 0; j < d; ++j) x(i, j) = g(rng) + 0.7 * s[i];
    }
    testing::Dense q(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        double dot = 1.0;
        for (std::size_t j = 0; j < d; ++j) dot += x(i, j) * x(k, j);
        q[i][k] = s[i] * s[k] * dot;
      }
    const BinarySvmSolution sol = train_binary_svm(x, s, c);
    const double oracle = testing::brute_force_box_qp(q, c);
    EXPECT_NEAR(sol.dual_objective, oracle, 1e-4) << "trial " << trial;
    EXPECT_TRUE(sol.converged);
    for (double a : sol.alpha) {
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, c);
    }
    // w is the dual combination of the augmented rows.
    for (std::size_t j = 0; j <= d; ++j) {
      double w = 0.0;
      for (std::size_t i = 0; i < n; ++i) w += sol.alpha[i] * s[i] * (j < d ? x(i, j) : 1.0);
      EXPECT_NEAR(sol.weights[j], w, 1e-9);
    }
    ++checked;
  }
  EXPECT_EQ(checked, 300);
}

TEST(SvmProperty, DualFeasibilityOnLargerProblems) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Blobs b = blobs(120, 5, 2, 0.8, seed);
    std::vector<int> s(b.y.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = b.y[i] ? 1 : -1;
    for (double c : {0.01, 1.0, 100.0}) {
      const BinarySvmSolution sol = train_binary_svm(b.x, s, c);
      for (double a : sol.alpha) {
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, c);
      }
      EXPECT_GT(sol.passes, 0);
    }
  }
}

TEST(Svm, TiesGoToLowestClass) {
  LinearSvmModel model;
  model.num_classes = 3;
  model.weights = Matrix(3, 3);  // all decision values zero
  EXPECT_EQ(predict(model, Matrix::FromRows({{1, 2}, {-3, 4}})), (std::vector<int>{0, 0}));
  model.weights(1, 2) = 1.0;
  model.weights(2, 2) = 1.0;
  EXPECT_EQ(predict(model, Matrix::FromRows({{1, 2}})), (std::vector<int>{1}));
}

TEST(Svm, ZeroColumnChangesNothing) {
  const Blobs b = blobs(90, 4, 3, 1.5, 17);
  Matrix padded(b.x.rows(), b.x.cols() + 1);
  for (std::size_t i = 0; i < b.x.rows(); ++i)
    for (std::size_t j = 0; j < b.x.cols(); ++j) padded(i, j) = b.x(i, j);
  const LinearSvmModel a = train_linear_svm(b.x, b.y, 3, 1.0);
  const LinearSvmModel p = train_linear_svm(padded, b.y, 3, 1.0);
  EXPECT_EQ(predict(a, b.x), predict(p, padded));
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t j = 0; j < b.x.cols(); ++j) EXPECT_EQ(a.weights(k, j), p.weights(k, j));
    EXPECT_EQ(p.weights(k, b.x.cols()), 0.0);
    EXPECT_EQ(a.weights(k, b.x.cols()), p.weights(k, b.x.cols() + 1));  // bias
  }
}

TEST(Svm, TwoClassOneVsRestAgreesWithBinary) {
  const Blobs b = blobs(200, 3, 2, 2.5, 4);
  std::vector<int> s(b.y.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = b.y[i] == 1 ? 1 : -1;
  const LinearSvmModel ovr = train_linear_svm(b.x, b.y, 2, 1.0);
  const BinarySvmSolution bin = train_binary_svm(b.x, s, 1.0);
  const std::vector<int> pred = predict(ovr, b.x);
  for (std::size_t i = 0; i < b.x.rows(); ++i) {
    double f = bin.weights.back();
    for (std::size_t j = 0; j < b.x.cols(); ++j) f += bin.weights[j] * b.x(i, j);
    EXPECT_EQ(pred[i], f > 0 ? 1 : 0) << "sample " << i;
  }
}

TEST(Svm, ThreadCountDoesNotChangeWeights) {
  const Blobs b = blobs(150, 6, 5, 1.0, 9);
  SvmOptions one, four;
  four.threads = 4;
  EXPECT_EQ(train_linear_svm(b.x, b.y, 5, 3.0, one).weights,
            train_linear_svm(b.x, b.y, 5, 3.0, four).weights);
}

TEST(Svm, Preconditions) {
  const Matrix x = Matrix::FromRows({{0}, {1}, {2}});
  EXPECT_THROW(train_linear_svm(x, std::vector<int>{0, 0, 0}, 2, 1.0), DataError);
  EXPECT_THROW(train_linear_svm(x, std::vector<int>{0, 1, 0}, 2, 0.0), ConfigError);
  EXPECT_THROW(train_linear_svm(x, std::vector<int>{0, 1}, 2, 1.0), DataError);
  EXPECT_THROW(train_linear_svm(x, std::vector<int>{0, 1, 0}, 1, 1.0), DataError);
  const LinearSvmModel m = train_linear_svm(x, std::vector<int>{0, 1, 1}, 2, 1.0);
  EXPECT_THROW(predict(m, Matrix::FromRows({{1, 2}})), NumericalError);
}

TEST(Svm, ModelRoundTrip) {
  const Blobs b = blobs(60, 3, 3, 2.0, 2);
  const LinearSvmModel model = train_linear_svm(b.x, b.y, 3, 0.1);
  std::stringstream buf;
  write_svm_model(buf, model);
  const LinearSvmModel back = read_svm_model(buf);
  EXPECT_EQ(back.weights, model.weights);
  EXPECT_EQ(back.c, model.c);
  EXPECT_EQ(back.num_classes, 3);
}

TEST(Folds, StratifiedAndDisjoint) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int classes = 2 + static_cast<int>(rng() % 4);
    std::vector<int> y;
    for (int c = 0; c < classes; ++c)
      for (int k = 0; k < 2 + static_cast<int>(rng() % 12); ++k) y.push_back(c);
    std::shuffle(y.begin(), y.end(), rng);
    const int k = 2 + static_cast<int>(rng() % 5);
    if (static_cast<std::size_t>(k) > y.size()) continue;
    const auto folds = make_stratified_folds(y, classes, k, rng());
    ASSERT_EQ(folds.size(), static_cast<std::size_t>(k));
    std::vector<int> seen(y.size(), 0);
    std::vector<int> totals(static_cast<std::size_t>(classes), 0);
    for (int v : y) ++totals[static_cast<std::size_t>(v)];
    for (const Fold& f : folds) {
      EXPECT_TRUE(std::is_sorted(f.train.begin(), f.train.end()));
      EXPECT_TRUE(std::is_sorted(f.validation.begin(), f.validation.end()));
      EXPECT_EQ(f.train.size() + f.validation.size(), y.size());
      std::set<std::size_t> train(f.train.begin(), f.train.end());
      std::vector<int> per(static_cast<std::size_t>(classes), 0);
      for (std::size_t i : f.validation) {
        EXPECT_FALSE(train.count(i));
        ++seen[i];
        ++per[static_cast<std::size_t>(y[i])];
      }
      for (int c = 0; c < classes; ++c) {
        EXPECT_LE(std::abs(per[static_cast<std::size_t>(c)] * k - totals[static_cast<std::size_t>(c)]), k);
      }
    }
    for (int v : seen) EXPECT_EQ(v, 1);
  }
}

TEST(Folds, Preconditions) {
  const std::vector<int> y = {0, 0, 1, 1, 1};
  EXPECT_THROW(make_stratified_folds(y, 2, 1, 0), DataError);
  EXPECT_THROW(make_stratified_folds(y, 2, 6, 0), DataError);
  EXPECT_THROW(make_stratified_folds(std::vector<int>{0, 1, 1}, 2, 2, 0), DataError);
  EXPECT_NO_THROW(make_stratified_folds(y, 2, 5, 0));
}

TEST(CrossValidation, LeaveOneOutMatchesLoopedOracle) {
  const Blobs b = blobs(16, 2, 2, 1.2, 31);
  const int n = static_cast<int>(b.y.size());
  CvPlan plan;
  plan.folds = n;
  plan.c_grid = {0.01, 0.1, 1, 10};
  const CvResult cv = cross_validate(b.y, 2, plan, svm_pipeline(b.x, b.y, 2, {}));

  std::vector<double> correct(plan.c_grid.size(), 0.0);
  for (int out = 0; out < n; ++out) {
    std::vector<std::size_t> keep;
    for (int i = 0; i < n; ++i)
      if (i != out) keep.push_back(static_cast<std::size_t>(i));
    std::vector<int> ky;
    for (std::size_t i : keep) ky.push_back(b.y[i]);
    const Matrix kx = b.x.select_rows(keep);
    const std::vector<std::size_t> held = {static_cast<std::size_t>(out)};
    for (std::size_t g = 0; g < plan.c_grid.size(); ++g) {
      const auto model = train_linear_svm(kx, ky, 2, plan.c_grid[g]);
      correct[g] += predict(model, b.x.select_rows(held))[0] == b.y[static_cast<std::size_t>(out)];
    }
  }
  ASSERT_EQ(cv.scores.size(), plan.c_grid.size());
  std::size_t best = 0;
  for (std::size_t g = 0; g < correct.size(); ++g) {
    EXPECT_DOUBLE_EQ(cv.scores[g].mean_accuracy, correct[g] / n);
    EXPECT_EQ(cv.scores[g].params.c, plan.c_grid[g]);
    if (correct[g] > correct[best]) best = g;
  }
  EXPECT_EQ(cv.best.c, plan.c_grid[best]);
}

// Scripted pipeline: accuracy per (rho, C) read from a table.
CvPipeline scripted(std::span<const int> y, std::map<std::pair<double, double>, bool> right) {
  std::vector<int> truth(y.begin(), y.end());
  return [truth, right](const Fold& fold, double rho, std::span<const double> grid) {
    std::vector<std::vector<int>> out;
    for (double c : grid) {
      const bool ok = right.at({rho, c});
      std::vector<int> pred;
      for (std::size_t i : fold.validation) pred.push_back(ok ? truth[i] : 1 - truth[i]);
      out.push_back(pred);
    }
    return out;
  };
}

TEST(CrossValidation, TiesPreferSmallerCThenSmallerRho) {
  const std::vector<int> y = {0, 1, 0, 1, 0, 1, 0, 1};
  CvPlan plan;
  plan.folds = 2;
  plan.c_grid = {10, 1};
  plan.rho_grid = {5, 0.5};
  const CvResult all = cross_validate(
      y, 2, plan, scripted(y, {{{5, 10}, true}, {{5, 1}, true}, {{0.5, 10}, true}, {{0.5, 1}, true}}));
  EXPECT_EQ(all.best, (CvParams{1, 0.5}));
  ASSERT_EQ(all.scores.size(), 4u);
  EXPECT_EQ(all.scores[0].params, (CvParams{10, 5}));
  EXPECT_EQ(all.scores[1].params, (CvParams{1, 5}));

  const CvResult one = cross_validate(
      y, 2, plan, scripted(y, {{{5, 10}, true}, {{5, 1}, false}, {{0.5, 10}, true}, {{0.5, 1}, false}}));
  EXPECT_EQ(one.best, (CvParams{10, 0.5}));
}

TEST(CrossValidation, SingleAndDuplicatedGridPoints) {
  const Blobs b = blobs(40, 3, 2, 1.0, 6);
  CvPlan plan;
  plan.folds = 4;
  plan.c_grid = {3.0};
  const CvResult single = cross_validate(b.y, 2, plan, svm_pipeline(b.x, b.y, 2, {}));
  EXPECT_EQ(single.best.c, 3.0);
  EXPECT_EQ(single.scores.size(), 1u);

  plan.c_grid = {3.0, 3.0};
  const CvResult dup = cross_validate(b.y, 2, plan, svm_pipeline(b.x, b.y, 2, {}));
  EXPECT_EQ(dup.best.c, 3.0);
  EXPECT_EQ(dup.scores[0].mean_accuracy, dup.scores[1].mean_accuracy);
  EXPECT_EQ(dup.scores[0].mean_accuracy, single.scores[0].mean_accuracy);
}

TEST(CrossValidation, PicksLargerCWhenSmallUnderfits) {
  // Tiny-scale features: with C = 1e-4 the margin term dominates and the
  // bias alone decides, so only the large C can separate.
  Blobs b = blobs(80, 2, 2, 8.0, 12);
  for (double& v : b.x.mutable_data()) v *= 0.01;
  CvPlan plan;
  plan.folds = 4;
  plan.c_grid = {1e-4, 1e4};
  const CvResult cv = cross_validate(b.y, 2, plan, svm_pipeline(b.x, b.y, 2, {}));
  EXPECT_EQ(cv.best.c, 1e4);
  EXPECT_GT(cv.scores[1].mean_accuracy, cv.scores[0].mean_accuracy + 0.2);
}

TEST(CrossValidation, ThreadCountDoesNotChangeScores) {
  const Blobs b = blobs(60, 4, 3, 1.0, 8);
  CvPlan plan;
  plan.folds = 3;
  plan.rho_grid = {1, 2, 3};
  auto pipe = svm_pipeline(b.x, b.y, 3, {});
  const CvResult a = cross_validate(b.y, 3, plan, pipe, 1);
  const CvResult c = cross_validate(b.y, 3, plan, pipe, 4);
  EXPECT_EQ(a.best, c.best);
  ASSERT_EQ(a.scores.size(), c.scores.size());
  for (std::size_t i = 0; i < a.scores.size(); ++i)
    EXPECT_EQ(a.scores[i].mean_accuracy, c.scores[i].mean_accuracy);
}

}  // namespace
}  // namespace desense
