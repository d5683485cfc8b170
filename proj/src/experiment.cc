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

#include "desense/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <utility>

#include "desense/cross_validation.h"
#include "desense/error.h"
#include "desense/metrics.h"
#include "desense/rdca.h"
#include "desense/svm.h"

namespace fs = std::filesystem;

namespace desense {
namespace {

struct Condition {
  CvParams params;
  std::vector<int> predictions;  // on the test side
  Matrix train_embedded;
  Matrix test_embedded;
};

std::vector<int> rows_of(std::span<const int> y, std::span<const std::size_t> idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(y[i]);
  return out;
}

// Projected features are multiplied by sqrt(N_fit): the components are
// normalized against unnormalized scatter, so without this the embedded
// training set would have total scatter ~ I, i.e. per-sample variance 1/N.
Matrix embed(const Matrix& x, const SubspaceProjection& sub, std::size_t fit_rows) {
  Matrix z = project(x, sub);
  const double scale = std::sqrt(static_cast<double>(fit_rows));
  for (double& v : z.mutable_data()) v *= scale;
  return z;
}

class Pipeline {
 public:
  Pipeline(const SplitDataset& data, const ExperimentConfig& config)
      : data_(data), config_(config) {
    const double scale =
        total_scatter_trace(data.train.features) / static_cast<double>(data.train.num_features());
    rho_scale_ = scale > 0 ? scale : 1.0;
    for (double mult : config.rho_multipliers) rho_grid_.push_back(mult * rho_scale_);
    svm_.threads = 1;
  }

  double rho_scale() const { return rho_scale_; }

  CvPlan plan(bool with_rho) const {
    CvPlan p;
    p.folds = config_.folds;
    p.c_grid = config_.c_grid;
    if (with_rho) p.rho_grid = rho_grid_;
    p.seed = config_.split.seed;
    return p;
  }

  // RDCA on `fit_label`, then an SVM on `target_label` over the chosen
  // subspace. BEFORE uses the full projection of the target's own RDCA;
  // AFTER uses the privacy label's noise subspace.
  Condition run(const std::string& fit_label, const std::string& target_label,
                SubspaceKind kind) const {
    const Matrix& x = data_.train.features;
    const Label& fit = data_.train.label(fit_label);
    const Label& target = data_.train.label(target_label);
    const int target_classes = target.num_classes();

    CvPipeline pipe = [&](const Fold& fold, double rho, std::span<const double> c_grid) {
      const Matrix fx = x.select_rows(fold.train);
      const RdcaModel model =
          fit_rdca(fx, rows_of(fit.classes, fold.train), fit.num_classes(), rho);
      const SubspaceProjection sub = make_subspace(model, kind);
      const Matrix tx = embed(fx, sub, fold.train.size());
      const Matrix vx = embed(x.select_rows(fold.validation), sub, fold.train.size());
      const std::vector<int> ty = rows_of(target.classes, fold.train);
      std::vector<std::vector<int>> out;
      for (double c : c_grid) {
        out.push_back(predict(train_linear_svm(tx, ty, target_classes, c, svm_), vx));
      }
      return out;
    };
    const CvResult cv =
        cross_validate(target.classes, target_classes, plan(true), pipe, config_.threads);

    const SubspaceProjection sub = make_subspace(full_fit(fit_label, cv.best.rho), kind);
    const Matrix tx = embed(x, sub, x.rows());
    const Matrix test_x = embed(data_.test.features, sub, x.rows());
    SvmOptions final_opts = svm_;
    final_opts.threads = config_.threads;
    const auto svm = train_linear_svm(tx, target.classes, target_classes, cv.best.c, final_opts);
    std::vector<int> pred = predict(svm, test_x);
    return {cv.best, std::move(pred), tx, test_x};
  }

  // Adversary on already desensitized data: an SVM with C tuned by CV.
  Condition attack(const std::string& target_label, const Condition& released) const {
    const Label& target = data_.train.label(target_label);
    const Matrix& x = released.train_embedded;
    const CvResult cv =
        cross_validate(target.classes, target.num_classes(), plan(false),
                       svm_pipeline(x, target.classes, target.num_classes(), svm_),
                       config_.threads);
    SvmOptions final_opts = svm_;
    final_opts.threads = config_.threads;
    const auto svm =
        train_linear_svm(x, target.classes, target.num_classes(), cv.best.c, final_opts);
    return {cv.best, predict(svm, released.test_embedded), {}, {}};
  }

 private:
  // BEFORE-privacy and AFTER-utility both fit the privacy label on the whole
  // training set and often land on the same ridge.
  const RdcaModel& full_fit(const std::string& label, double rho) const {
    const auto key = std::make_pair(label, rho);
    auto it = full_fits_.find(key);
    if (it == full_fits_.end()) {
      it = full_fits_.emplace(key, fit_rdca(data_.train, label, rho)).first;
    }
    return it->second;
  }

  const SplitDataset& data_;
  const ExperimentConfig& config_;
  double rho_scale_ = 1.0;
  std::vector<double> rho_grid_;
  SvmOptions svm_;
  mutable std::map<std::pair<std::string, double>, RdcaModel> full_fits_;
};

Accuracies score(const std::vector<int>& pred, const Label& truth) {
  return {accuracy(pred, truth.classes),
          per_class_accuracy(pred, truth.classes, truth.num_classes())};
}

ExperimentConfig base(const std::string& name, DatasetKind kind) {
  ExperimentConfig c;
  c.name = name;
  c.dataset = kind;
  return c;
}

}  // namespace

const char* to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kHar: return "har";
    case DatasetKind::kCmu: return "cmu";
    case DatasetKind::kSemeion: return "semeion";
  }
  return "unknown";
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> kNames = {
      "har", "cmu-pose-utility", "cmu-glasses-utility", "semeion-u04", "semeion-u59"};
  return kNames;
}

ExperimentConfig named_experiment(const std::string& name) {
  if (name == "har") {
    ExperimentConfig c = base(name, DatasetKind::kHar);
    c.utility_label = "activity";
    c.privacy_label = "subject";
    c.utility_display = "Activity";
    c.privacy_display = "Person Identification";
    // The published HAR split separates subjects, so identities in the test
    // files never occur in training. Pool and re-split by subject instead,
    // holding out the same share of samples as a 5379/798 split.
    c.split.test_fraction = 0.13;
    return c;
  }
  if (name == "cmu-pose-utility" || name == "cmu-glasses-utility") {
    ExperimentConfig c = base(name, DatasetKind::kCmu);
    const bool pose_utility = name == "cmu-pose-utility";
    c.utility_label = pose_utility ? "pose" : "sunglasses";
    c.privacy_label = pose_utility ? "sunglasses" : "pose";
    c.utility_display = pose_utility ? "Pose" : "Glasses";
    c.privacy_display = pose_utility ? "Glasses" : "Pose";
    return c;
  }
  if (name == "semeion-u04" || name == "semeion-u59") {
    ExperimentConfig c = base(name, DatasetKind::kSemeion);
    c.protect_high = name == "semeion-u04";
    c.utility_label = c.protect_high ? "digit_0_4" : "digit_5_9";
    c.privacy_label = c.protect_high ? "digit_5_9" : "digit_0_4";
    c.utility_display = "Digit";
    c.privacy_display = "Digit";
    return c;
  }
  std::string valid;
  for (const auto& n : experiment_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ConfigError("unknown experiment '" + name + "' (valid: " + valid + ")");
}

void validate(const ExperimentConfig& config) {
  if (config.utility_label.empty() || config.privacy_label.empty()) {
    throw ConfigError(config.name + ": utility and privacy labels are required");
  }
  if (config.utility_label == config.privacy_label) {
    throw ConfigError(config.name + ": utility and privacy label are both '" +
                      config.utility_label + "'");
  }
  if (config.c_grid.empty() || config.rho_multipliers.empty()) {
    throw ConfigError(config.name + ": empty hyperparameter grid");
  }
  for (double c : config.c_grid)
    if (!(c > 0) || !std::isfinite(c)) throw ConfigError(config.name + ": C values must be > 0");
  for (double r : config.rho_multipliers)
    if (!(r >= 0) || !std::isfinite(r)) throw ConfigError(config.name + ": ridge multipliers must be >= 0");
  if (config.folds < 2) throw ConfigError(config.name + ": need at least 2 folds");
  if (config.threads < 1) throw ConfigError(config.name + ": threads must be >= 1");
}

fs::path resolve_dataset_path(DatasetKind kind, const fs::path& data_dir) {
  std::vector<fs::path> candidates;
  switch (kind) {
    case DatasetKind::kHar:
      candidates = {data_dir / "UCI HAR Dataset", data_dir / "har", data_dir};
      for (const auto& p : candidates)
        if (fs::is_directory(p / "train")) return p;
      break;
    case DatasetKind::kCmu:
      candidates = {data_dir / "faces", data_dir / "cmu_faces", data_dir / "cmu"};
      for (const auto& p : candidates)
        if (fs::is_directory(p)) return p;
      break;
    case DatasetKind::kSemeion:
      candidates = {data_dir / "semeion.data", data_dir / "semeion" / "semeion.data"};
      for (const auto& p : candidates)
        if (fs::is_regular_file(p)) return p;
      break;
  }
  std::string list;
  for (const auto& p : candidates) list += (list.empty() ? "" : ", ") + p.string();
  throw DataError(std::string(to_string(kind)) + " dataset not found (looked for " + list + ")");
}

SplitDataset load_experiment_data(const ExperimentConfig& config, std::size_t* skipped) {
  const fs::path path = resolve_dataset_path(config.dataset, config.data_dir);
  const std::string stratify =
      config.split.stratify_by.empty() ? config.privacy_label : config.split.stratify_by;
  auto split = [&](const Dataset& ds) {
    return stratified_split(ds, stratify, config.split.test_fraction, config.split.seed);
  };
  if (skipped) *skipped = 0;

  SplitDataset out;
  switch (config.dataset) {
    case DatasetKind::kHar: {
      SplitDataset published = load_har(path);
      out = config.split.kind == SplitKind::kPublished ? std::move(published)
                                                       : split(concatenate(published));
      break;
    }
    case DatasetKind::kCmu: {
      LoadStats stats;
      const Dataset ds = load_cmu_faces(path, &stats);
      if (skipped) *skipped = stats.skipped;
      out = split(ds);
      break;
    }
    case DatasetKind::kSemeion: {
      Dataset ds = load_semeion(path);
      auto [utility, privacy] = build_split_labels(ds.label("digit").classes, config.protect_high);
      ds.labels[config.utility_label] = std::move(utility);
      ds.labels[config.privacy_label] = std::move(privacy);
      out = split(ds);
      break;
    }
  }
  if (config.standardize) standardize_features(out);
  return out;
}

ExperimentReport run_pipeline(const SplitDataset& data, const ExperimentConfig& config,
                              std::size_t skipped_files) {
  validate(config);
  validate(data);
  const auto start = std::chrono::steady_clock::now();
  const Label& u_train = data.train.label(config.utility_label);
  const Label& p_train = data.train.label(config.privacy_label);
  const Label& u_test = data.test.label(config.utility_label);
  const Label& p_test = data.test.label(config.privacy_label);
  validate(Dataset{Matrix(data.train.num_samples(), 0),
                   {{config.utility_label, u_train}, {config.privacy_label, p_train}},
                   {}});

  Pipeline pipeline(data, config);

  const Condition before_u =
      pipeline.run(config.utility_label, config.utility_label, SubspaceKind::kFull);
  const Condition before_p =
      pipeline.run(config.privacy_label, config.privacy_label, SubspaceKind::kFull);
  const Condition after_u =
      pipeline.run(config.privacy_label, config.utility_label, SubspaceKind::kNoise);
  const std::size_t desensitized = after_u.train_embedded.cols();
  const Condition after_p = pipeline.attack(config.privacy_label, after_u);

  ExperimentReport r;
  r.config = {config.name,
              to_string(config.dataset),
              config.utility_label,
              config.privacy_label,
              config.split.kind == SplitKind::kPublished ? "published" : "stratified",
              config.split.kind == SplitKind::kPublished ? 0.0 : config.split.test_fraction,
              config.split.kind == SplitKind::kPublished
                  ? ""
                  : (config.split.stratify_by.empty() ? config.privacy_label
                                                      : config.split.stratify_by),
              config.split.seed,
              config.rho_multipliers,
              config.c_grid,
              config.folds,
              config.standardize};
  r.stats = {data.train.num_samples(), data.test.num_samples(), data.train.num_features(),
             u_train.num_classes(),    p_train.num_classes(),   skipped_files};
  r.rho_scale = pipeline.rho_scale();
  r.before_utility = {before_u.params.rho, before_u.params.c};
  r.before_privacy = {before_p.params.rho, before_p.params.c};
  r.after_utility = {after_u.params.rho, after_u.params.c};
  r.after_privacy_c = after_p.params.c;
  r.desensitized_features = desensitized;

  auto make_row = [](const std::string& role, const std::string& name, const std::string& display,
                     const Label& train, const Label& test, const Condition& before,
                     const Condition& after) {
    LabelReport row;
    row.role = role;
    row.label = name;
    row.display_name = display.empty() ? name : display;
    row.class_names = train.class_names;
    row.grouped = std::find(train.class_names.begin(), train.class_names.end(),
                            kRestClassName) != train.class_names.end();
    const RandomGuess guess = random_guess_accuracy(train.classes, train.num_classes());
    row.random_guess = {guess.overall, guess.per_class};
    row.before = score(before.predictions, test);
    row.after = score(after.predictions, test);
    return row;
  };
  r.rows.push_back(make_row("utility", config.utility_label, config.utility_display, u_train,
                            u_test, before_u, after_u));
  r.rows.push_back(make_row("privacy", config.privacy_label, config.privacy_display, p_train,
                            p_test, before_p, after_p));
  r.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  validate(config);
  std::size_t skipped = 0;
  const SplitDataset data = load_experiment_data(config, &skipped);
  return run_pipeline(data, config, skipped);
}

std::vector<ExperimentReport> run_suite(const std::vector<std::string>& names,
                                        const SuiteOptions& options) {
  std::vector<ExperimentConfig> configs;
  for (const auto& n : names) {
    ExperimentConfig c = named_experiment(n);
    c.data_dir = options.data_dir;
    c.split.seed = options.seed;
    c.threads = options.threads;
    if (!options.rho_multipliers.empty()) c.rho_multipliers = options.rho_multipliers;
    if (!options.c_grid.empty()) c.c_grid = options.c_grid;
    if (options.folds) c.folds = options.folds;
    validate(c);
    configs.push_back(std::move(c));
  }
  std::vector<ExperimentReport> reports;
  for (const auto& c : configs) reports.push_back(run_experiment(c));

  if (!options.out_dir.empty()) {
    fs::create_directories(options.out_dir);
    for (const auto& r : reports) {
      std::ofstream out(options.out_dir / (r.config.name + extension(options.format)));
      if (!out) throw DataError(options.out_dir.string() + ": cannot write report");
      out << emit_table(r, options.format, options.include_timing);
    }
    std::ofstream summary(options.out_dir / "summary.json");
    if (!summary) throw DataError(options.out_dir.string() + ": cannot write summary");
    summary << summary_json(reports).dump(2) << "\n";
  }
  return reports;
}

}  // namespace desense
