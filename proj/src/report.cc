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

#include "desense/report.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "desense/dataset.h"
#include "desense/error.h"

namespace desense {
namespace {

using Json = nlohmann::ordered_json;

Json to_json(const Accuracies& a) {
  return Json{{"overall", a.overall}, {"per_class", a.per_class}};
}

Accuracies accuracies_from_json(const Json& j) {
  return {j.at("overall").get<double>(), j.at("per_class").get<std::vector<double>>()};
}

Json to_json(const SelectedParams& p) { return Json{{"rho", p.rho}, {"c", p.c}}; }

SelectedParams params_from_json(const Json& j) {
  return {j.at("rho").get<double>(), j.at("c").get<double>()};
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

std::string fraction(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Class indices in table order: grouped "The Rest" last.
std::vector<std::size_t> table_order(const LabelReport& row) {
  std::vector<std::size_t> order, rest;
  for (std::size_t c = 0; c < row.class_names.size(); ++c)
    (row.class_names[c] == kRestClassName ? rest : order).push_back(c);
  order.insert(order.end(), rest.begin(), rest.end());
  return order;
}

std::string role_title(const std::string& role) {
  return role == "utility" ? "Utility" : "Privacy";
}

std::string class_span(const LabelReport& row) {
  std::string first, last;
  for (const auto& n : row.class_names) {
    if (n == kRestClassName) continue;
    if (first.empty()) first = n;
    last = n;
  }
  return first == last ? first : first + "-" + last;
}

std::string markdown(const ExperimentReport& r, bool include_timing) {
  std::ostringstream out;
  out << "## " << r.config.name << "\n\n";
  const bool grouped = std::any_of(r.rows.begin(), r.rows.end(),
                                   [](const LabelReport& row) { return row.grouped; });
  const char* header =
      " | Random Guess | Before Desensitization | After Desensitization |\n"
      "|---|---|---|---|\n";
  if (!grouped) {
    out << "| Label" << header;
    for (const auto& row : r.rows) {
      out << "| " << row.display_name << " (" << role_title(row.role) << ") | "
          << percent(row.random_guess.overall) << " | " << percent(row.before.overall) << " | "
          << percent(row.after.overall) << " |\n";
    }
  } else {
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      const auto& row = r.rows[i];
      if (i) out << "\n";
      out << role_title(row.role) << ": " << class_span(row) << "\n\n";
      out << "| " << row.display_name << header;
      for (std::size_t c : table_order(row)) {
        out << "| " << row.class_names[c] << " | " << percent(row.random_guess.per_class[c])
            << " | " << percent(row.before.per_class[c]) << " | "
            << percent(row.after.per_class[c]) << " |\n";
      }
    }
  }
  out << "\nTrain/test samples: " << r.stats.train_samples << "/" << r.stats.test_samples
      << ", features: " << r.stats.features << ", desensitized features: "
      << r.desensitized_features << ", seed: " << r.config.seed << "\n";
  if (include_timing) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "Wall time: %.2f s\n", r.seconds);
    out << buf;
  }
  return out.str();
}

std::string csv(const ExperimentReport& r, bool include_timing) {
  std::ostringstream out;
  out << "experiment,role,label,class,random_guess,before,after\n";
  for (const auto& row : r.rows) {
    out << r.config.name << "," << row.role << "," << row.label << ",overall,"
        << fraction(row.random_guess.overall) << "," << fraction(row.before.overall) << ","
        << fraction(row.after.overall) << "\n";
    if (!row.grouped) continue;
    for (std::size_t c : table_order(row)) {
      out << r.config.name << "," << row.role << "," << row.label << "," << row.class_names[c]
          << "," << fraction(row.random_guess.per_class[c]) << ","
          << fraction(row.before.per_class[c]) << "," << fraction(row.after.per_class[c])
          << "\n";
    }
  }
  if (include_timing) out << "# seconds," << r.seconds << "\n";
  return out.str();
}

}  // namespace

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::kJson;
  if (s == "csv") return ReportFormat::kCsv;
  if (s == "markdown" || s == "md") return ReportFormat::kMarkdown;
  throw ConfigError("unknown report format '" + s + "' (expected json, csv or markdown)");
}

const char* extension(ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson: return ".json";
    case ReportFormat::kCsv: return ".csv";
    case ReportFormat::kMarkdown: return ".md";
  }
  return ".txt";
}

nlohmann::ordered_json to_json(const ExperimentReport& r, bool include_timing) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"role", row.role},
                        {"label", row.label},
                        {"display_name", row.display_name},
                        {"class_names", row.class_names},
                        {"grouped", row.grouped},
                        {"random_guess", to_json(row.random_guess)},
                        {"before", to_json(row.before)},
                        {"after", to_json(row.after)}});
  }
  const auto& c = r.config;
  Json j{
      {"schema_version", r.schema_version},
      {"config",
       {{"name", c.name},
        {"dataset", c.dataset},
        {"utility_label", c.utility_label},
        {"privacy_label", c.privacy_label},
        {"split", c.split},
        {"test_fraction", c.test_fraction},
        {"stratify_by", c.stratify_by},
        {"seed", c.seed},
        {"rho_multipliers", c.rho_multipliers},
        {"c_grid", c.c_grid},
        {"folds", c.folds},
        {"standardize", c.standardize}}},
      {"dataset",
       {{"train_samples", r.stats.train_samples},
        {"test_samples", r.stats.test_samples},
        {"features", r.stats.features},
        {"utility_classes", r.stats.utility_classes},
        {"privacy_classes", r.stats.privacy_classes},
        {"skipped_files", r.stats.skipped_files}}},
      {"rho_scale", r.rho_scale},
      {"selected",
       {{"before_utility", to_json(r.before_utility)},
        {"before_privacy", to_json(r.before_privacy)},
        {"after_utility", to_json(r.after_utility)},
        {"after_privacy_c", r.after_privacy_c}}},
      {"desensitized_features", r.desensitized_features},
      {"rows", rows}};
  if (include_timing) j["seconds"] = r.seconds;
  return j;
}

ExperimentReport report_from_json(const nlohmann::ordered_json& j) {
  try {
    ExperimentReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw DataError("unsupported report schema_version " + std::to_string(r.schema_version));
    }
    const Json& c = j.at("config");
    r.config = {c.at("name").get<std::string>(),
                c.at("dataset").get<std::string>(),
                c.at("utility_label").get<std::string>(),
                c.at("privacy_label").get<std::string>(),
                c.at("split").get<std::string>(),
                c.at("test_fraction").get<double>(),
                c.at("stratify_by").get<std::string>(),
                c.at("seed").get<std::uint64_t>(),
                c.at("rho_multipliers").get<std::vector<double>>(),
                c.at("c_grid").get<std::vector<double>>(),
                c.at("folds").get<int>(),
                c.at("standardize").get<bool>()};
    const Json& d = j.at("dataset");
    r.stats = {d.at("train_samples").get<std::size_t>(), d.at("test_samples").get<std::size_t>(),
               d.at("features").get<std::size_t>(),      d.at("utility_classes").get<int>(),
               d.at("privacy_classes").get<int>(),       d.at("skipped_files").get<std::size_t>()};
    r.rho_scale = j.at("rho_scale").get<double>();
    const Json& s = j.at("selected");
    r.before_utility = params_from_json(s.at("before_utility"));
    r.before_privacy = params_from_json(s.at("before_privacy"));
    r.after_utility = params_from_json(s.at("after_utility"));
    r.after_privacy_c = s.at("after_privacy_c").get<double>();
    r.desensitized_features = j.at("desensitized_features").get<std::size_t>();
    for (const Json& row : j.at("rows")) {
      r.rows.push_back({row.at("role").get<std::string>(),
                        row.at("label").get<std::string>(),
                        row.at("display_name").get<std::string>(),
                        row.at("class_names").get<std::vector<std::string>>(),
                        row.at("grouped").get<bool>(),
                        accuracies_from_json(row.at("random_guess")),
                        accuracies_from_json(row.at("before")),
                        accuracies_from_json(row.at("after"))});
    }
    if (j.contains("seconds")) r.seconds = j.at("seconds").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report JSON: ") + e.what());
  }
}

std::string emit_table(const ExperimentReport& report, ReportFormat format,
                       bool include_timing) {
  switch (format) {
    case ReportFormat::kJson: return to_json(report, include_timing).dump(2) + "\n";
    case ReportFormat::kCsv: return csv(report, include_timing);
    case ReportFormat::kMarkdown: return markdown(report, include_timing);
  }
  return {};
}

double utility_drop(const ExperimentReport& report) {
  const LabelReport& u = report.utility();
  if (!u.grouped) return u.before.overall - u.after.overall;
  double sum = 0.0;
  int n = 0;
  for (std::size_t c = 0; c < u.class_names.size(); ++c) {
    if (u.class_names[c] == kRestClassName) continue;
    sum += u.before.per_class[c] - u.after.per_class[c];
    ++n;
  }
  return n ? sum / n : 0.0;
}

TradeoffSummary summarize_tradeoffs(const std::vector<ExperimentReport>& reports) {
  struct Acc {
    double sum = 0.0;
    int n = 0;
    std::optional<double> mean() const {
      return n ? std::optional<double>(sum / n) : std::nullopt;
    }
  } har, cmu, semeion;
  for (const auto& r : reports) {
    const LabelReport& u = r.utility();
    if (r.config.dataset == "semeion" && u.grouped) {
      // Pool per-digit drops across the two digit experiments.
      for (std::size_t c = 0; c < u.class_names.size(); ++c) {
        if (u.class_names[c] == kRestClassName) continue;
        semeion.sum += u.before.per_class[c] - u.after.per_class[c];
        ++semeion.n;
      }
    } else if (r.config.dataset == "har") {
      har.sum += utility_drop(r);
      ++har.n;
    } else if (r.config.dataset == "cmu") {
      cmu.sum += utility_drop(r);
      ++cmu.n;
    }
  }
  return {har.mean(), cmu.mean(), semeion.mean()};
}

nlohmann::ordered_json summary_json(const std::vector<ExperimentReport>& reports) {
  Json experiments = Json::array();
  for (const auto& r : reports) {
    experiments.push_back(Json{{"name", r.config.name},
                               {"utility_before", r.utility().before.overall},
                               {"utility_after", r.utility().after.overall},
                               {"privacy_random_guess", r.privacy().random_guess.overall},
                               {"privacy_before", r.privacy().before.overall},
                               {"privacy_after", r.privacy().after.overall},
                               {"utility_drop", utility_drop(r)}});
  }
  const TradeoffSummary t = summarize_tradeoffs(reports);
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"schema_version", kReportSchemaVersion},
              {"experiments", experiments},
              {"utility_drop",
               {{"har", opt(t.har)}, {"cmu", opt(t.cmu)}, {"semeion", opt(t.semeion)}}}};
}

}  // namespace desense
