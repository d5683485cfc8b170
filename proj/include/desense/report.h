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

#ifndef DESENSE_REPORT_H_
#define DESENSE_REPORT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace desense {

inline constexpr int kReportSchemaVersion = 1;

struct Accuracies {
  double overall = 0.0;
  std::vector<double> per_class;
  friend bool operator==(const Accuracies&, const Accuracies&) = default;
};

// One row of a results table: a label under its three conditions.
struct LabelReport {
  std::string role;  // "utility" or "privacy"
  std::string label;
  std::string display_name;
  std::vector<std::string> class_names;
  bool grouped = false;  // carries a "The Rest" class; tables list classes
  Accuracies random_guess;
  Accuracies before;
  Accuracies after;
  friend bool operator==(const LabelReport&, const LabelReport&) = default;
};

struct SelectedParams {
  double rho = 0.0;
  double c = 0.0;
  friend bool operator==(const SelectedParams&, const SelectedParams&) = default;
};

struct ReportConfig {
  std::string name;
  std::string dataset;
  std::string utility_label;
  std::string privacy_label;
  std::string split;  // "published" or "stratified"
  double test_fraction = 0.0;
  std::string stratify_by;
  std::uint64_t seed = 0;
  std::vector<double> rho_multipliers;
  std::vector<double> c_grid;
  int folds = 0;
  bool standardize = false;
  friend bool operator==(const ReportConfig&, const ReportConfig&) = default;
};

struct DatasetStats {
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
  std::size_t features = 0;
  int utility_classes = 0;
  int privacy_classes = 0;
  std::size_t skipped_files = 0;
  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

struct ExperimentReport {
  int schema_version = kReportSchemaVersion;
  ReportConfig config;
  DatasetStats stats;
  double rho_scale = 0.0;  // trace(S_T) / M of the training set
  SelectedParams before_utility;
  SelectedParams before_privacy;
  SelectedParams after_utility;
  double after_privacy_c = 0.0;
  std::size_t desensitized_features = 0;
  std::vector<LabelReport> rows;  // utility, then privacy
  double seconds = 0.0;           // wall time; serialized only on request

  const LabelReport& utility() const { return rows.at(0); }
  const LabelReport& privacy() const { return rows.at(1); }
  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

enum class ReportFormat { kJson, kCsv, kMarkdown };

// Throws ConfigError for anything but json, csv or markdown.
ReportFormat report_format_from_string(const std::string& s);
const char* extension(ReportFormat format);

nlohmann::ordered_json to_json(const ExperimentReport& report, bool include_timing = false);
ExperimentReport report_from_json(const nlohmann::ordered_json& j);

// Deterministic rendering. Wall time appears only with include_timing, so
// equal inputs give byte-identical text.
std::string emit_table(const ExperimentReport& report, ReportFormat format,
                       bool include_timing = false);

// Utility accuracy lost to desensitization: before - after overall, or for
// grouped labels the mean per-class drop over the non-grouped classes.
double utility_drop(const ExperimentReport& report);

// Average utility drop per dataset family, pooled over its experiments.
struct TradeoffSummary {
  std::optional<double> har;
  std::optional<double> cmu;
  std::optional<double> semeion;
};
TradeoffSummary summarize_tradeoffs(const std::vector<ExperimentReport>& reports);

nlohmann::ordered_json summary_json(const std::vector<ExperimentReport>& reports);

}  // namespace desense

#endif  // DESENSE_REPORT_H_
