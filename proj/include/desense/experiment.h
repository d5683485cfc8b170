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

#ifndef DESENSE_EXPERIMENT_H_
#define DESENSE_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "desense/dataset.h"
#include "desense/loaders.h"
#include "desense/report.h"

namespace desense {

enum class DatasetKind { kHar, kCmu, kSemeion };
const char* to_string(DatasetKind kind);

enum class SplitKind { kPublished, kStratified };

struct SplitSpec {
  SplitKind kind = SplitKind::kStratified;
  double test_fraction = 0.3;
  std::string stratify_by;  // defaults to the privacy label when empty
  std::uint64_t seed = 2017;
};

struct ExperimentConfig {
  std::string name;
  DatasetKind dataset = DatasetKind::kSemeion;
  std::string utility_label;
  std::string privacy_label;
  std::string utility_display;
  std::string privacy_display;
  // Digit-grouping experiments: which half of the digits is protected.
  bool protect_high = true;
  SplitSpec split;
  // Ridge candidates, as multiples of trace(S_T) / M of the training set.
  std::vector<double> rho_multipliers = {1e-3, 1e-2, 1e-1, 1, 1e1, 1e2, 1e3};
  std::vector<double> c_grid = {0.01, 0.1, 1, 10, 100};
  int folds = 5;
  bool standardize = false;
  std::filesystem::path data_dir;
  int threads = 1;
};

// The five reproducible experiments.
const std::vector<std::string>& experiment_names();

// Throws ConfigError listing the valid names for an unknown one.
ExperimentConfig named_experiment(const std::string& name);

// Utility and privacy labels must differ; grids must be nonempty and
// positive; folds >= 2. Throws ConfigError.
void validate(const ExperimentConfig& config);

// Where a dataset is expected under `data_dir`. Throws DataError listing the
// candidates when none exists.
std::filesystem::path resolve_dataset_path(DatasetKind kind, const std::filesystem::path& data_dir);

// Loads the configured dataset, attaches the grouped digit labels when
// needed, and splits it. `skipped` receives the count of unreadable files.
SplitDataset load_experiment_data(const ExperimentConfig& config, std::size_t* skipped = nullptr);

// Random guess, before and after desensitization for an already split
// dataset carrying the configured labels.
ExperimentReport run_pipeline(const SplitDataset& data, const ExperimentConfig& config,
                              std::size_t skipped_files = 0);

ExperimentReport run_experiment(const ExperimentConfig& config);

struct SuiteOptions {
  std::filesystem::path data_dir;
  std::filesystem::path out_dir;  // nothing is written when empty
  ReportFormat format = ReportFormat::kJson;
  std::uint64_t seed = 2017;
  int threads = 1;
  bool include_timing = false;
  // Overrides of the named experiments' grids; empty or 0 keeps the default.
  std::vector<double> rho_multipliers;
  std::vector<double> c_grid;
  int folds = 0;
};

// Runs each named experiment in order, writing <name><ext> per report and
// summary.json into out_dir. Unknown names fail before anything runs.
std::vector<ExperimentReport> run_suite(const std::vector<std::string>& names,
                                        const SuiteOptions& options);

}  // namespace desense

#endif  // DESENSE_EXPERIMENT_H_
