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

// desense: run the desensitization experiments and apply RDCA projections to
// delimited feature files.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "desense/error.h"
#include "desense/experiment.h"
#include "desense/loaders.h"
#include "desense/model_io.h"
#include "desense/rdca.h"
#include "desense/report.h"

namespace {

std::string default_data_dir() {
  const char* env = std::getenv("DESENSE_DATA_DIR");
  return env ? env : "";
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw desense::DataError(path + ": cannot open for writing");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy desensitization by ridge discriminant component analysis"};
  app.require_subcommand(1);

  std::string data_dir = default_data_dir();
  std::uint64_t seed = 2017;
  int threads = 1;
  std::string format = "json";
  bool timing = false;
  std::vector<double> rho_multipliers, c_grid;
  int folds = 0;

  // Grid overrides shared by run and suite; defaults come from the named
  // experiment.
  auto add_grid_options = [&](CLI::App* cmd) {
    cmd->add_option("--rho-multipliers", rho_multipliers,
                    "Ridge grid as multiples of trace(S_T)/M, comma separated")
        ->delimiter(',');
    cmd->add_option("--c-grid", c_grid, "SVM cost grid, comma separated")->delimiter(',');
    cmd->add_option("--folds", folds, "Cross-validation folds")->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "Run one experiment");
  std::string experiment;
  std::string out_path;
  run->add_option("--experiment", experiment, "Experiment name")->required();
  run->add_option("--data-dir", data_dir, "Dataset root (default: $DESENSE_DATA_DIR)");
  run->add_option("--seed", seed, "Split and fold seed");
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--format", format, "json, csv or markdown");
  run->add_option("--out", out_path, "Report path ('-' for stdout)")->required();
  run->add_flag("--timing", timing, "Include wall time in the report");
  add_grid_options(run);

  auto* suite = app.add_subcommand("suite", "Run several experiments");
  bool all = false;
  std::vector<std::string> names;
  std::string out_dir;
  suite->add_flag("--all", all, "Run all five experiments");
  suite->add_option("--experiments", names, "Experiment names")->delimiter(',');
  suite->add_option("--data-dir", data_dir, "Dataset root (default: $DESENSE_DATA_DIR)");
  suite->add_option("--seed", seed, "Split and fold seed");
  suite->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  suite->add_option("--format", format, "json, csv or markdown");
  suite->add_option("--out-dir", out_dir, "Directory for reports and summary.json")->required();
  suite->add_flag("--timing", timing, "Include wall time in the reports");
  add_grid_options(suite);

  auto* fit = app.add_subcommand("fit", "Fit RDCA on a delimited feature file");
  std::string features, labels, model_path, label_name = "label";
  double ridge = -1.0, relative_ridge = -1.0;
  fit->add_option("--features", features, "N x M delimited reals")->required();
  fit->add_option("--labels", labels, "One class per line")->required();
  fit->add_option("--label-name", label_name, "Name stored in the model");
  fit->add_option("--ridge", ridge, "Absolute ridge");
  fit->add_option("--relative-ridge", relative_ridge, "Ridge as a multiple of trace(S_T)/M");
  fit->add_option("--out", model_path, "Model file")->required();

  auto* transform = app.add_subcommand("transform", "Project features through a fitted model");
  std::string subspace = "noise", transformed;
  transform->add_option("--model", model_path, "Model file")->required();
  transform->add_option("--features", features, "N x M delimited reals")->required();
  transform->add_option("--subspace", subspace, "noise, signal or full");
  transform->add_option("--out", transformed, "Output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      desense::ExperimentConfig config = desense::named_experiment(experiment);
      config.data_dir = data_dir;
      config.split.seed = seed;
      config.threads = threads;
      if (!rho_multipliers.empty()) config.rho_multipliers = rho_multipliers;
      if (!c_grid.empty()) config.c_grid = c_grid;
      if (folds) config.folds = folds;
      const auto fmt = desense::report_format_from_string(format);
      const auto report = desense::run_experiment(config);
      write_text(out_path, desense::emit_table(report, fmt, timing));
    } else if (*suite) {
      if (all) names = desense::experiment_names();
      desense::SuiteOptions options;
      options.data_dir = data_dir;
      options.out_dir = out_dir;
      options.format = desense::report_format_from_string(format);
      options.seed = seed;
      options.threads = threads;
      options.include_timing = timing;
      options.rho_multipliers = rho_multipliers;
      options.c_grid = c_grid;
      options.folds = folds;
      const auto reports = desense::run_suite(names, options);
      std::cerr << "wrote " << reports.size() << " report(s) to " << out_dir << "\n";
    } else if (*fit) {
      if ((ridge >= 0) == (relative_ridge >= 0)) {
        throw desense::ConfigError("give exactly one of --ridge or --relative-ridge");
      }
      const desense::Matrix x = desense::read_delimited_matrix(features);
      const desense::Label label = desense::label_from_strings(desense::read_label_file(labels));
      if (label.classes.size() != x.rows()) {
        throw desense::DataError("label file has " + std::to_string(label.classes.size()) +
                                 " entries for " + std::to_string(x.rows()) + " rows");
      }
      if (relative_ridge >= 0) {
        ridge = relative_ridge * desense::total_scatter_trace(x) / static_cast<double>(x.cols());
      }
      desense::RdcaModel model = desense::fit_rdca(x, label.classes, label.num_classes(), ridge);
      model.label_name = label_name;
      model.class_names = label.class_names;
      desense::save_rdca_model(model_path, model);
    } else if (*transform) {
      const desense::RdcaModel model = desense::load_rdca_model(model_path);
      const auto sub =
          desense::make_subspace(model, desense::subspace_kind_from_string(subspace));
      desense::write_delimited_matrix(transformed,
                                      desense::project(desense::read_delimited_matrix(features), sub));
    }
  } catch (const desense::Error& e) {
    std::cerr << "desense: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "desense: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
