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

#include "desense/loaders.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

#include "desense/error.h"
#include "desense/pgm.h"

namespace fs = std::filesystem;

namespace desense {
namespace {

std::ifstream open_or_throw(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw DataError(path.string() + ": missing file");
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open");
  return in;
}

// Splits on whitespace and commas.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (std::isspace(static_cast<unsigned char>(line[i])) || line[i] == ','))
      ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != ',')
      ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_double(std::string_view s, double* out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(*out);
}

bool is_integer(const std::string& s) {
  if (s.empty()) return false;
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  return start < s.size() && s.find_first_not_of("0123456789", start) == std::string::npos;
}

std::vector<int> read_int_column(const fs::path& path) {
  std::vector<int> out;
  for (const auto& tok : read_label_file(path)) {
    if (!is_integer(tok)) throw DataError(path.string() + ": non-integer label '" + tok + "'");
    out.push_back(std::stoi(tok));
  }
  return out;
}

// Maps raw integer codes onto dense class indices ordered by code.
Label label_from_codes(const std::vector<int>& codes, const std::set<int>& universe,
                       const std::map<int, std::string>& names) {
  std::map<int, int> index;
  Label lab;
  for (int code : universe) {
    index[code] = static_cast<int>(lab.class_names.size());
    auto it = names.find(code);
    lab.class_names.push_back(it != names.end() ? it->second : std::to_string(code));
  }
  for (int code : codes) lab.classes.push_back(index.at(code));
  return lab;
}

}  // namespace

Matrix read_delimited_matrix(const fs::path& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<double> data;
  std::size_t cols = 0, rows = 0, line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (rows == 0) cols = fields.size();
    if (fields.size() != cols) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(cols) + " fields, found " + std::to_string(fields.size()));
    }
    for (auto f : fields) {
      double v;
      if (!parse_double(f, &v)) {
        throw DataError(path.string() + ":" + std::to_string(line_no) +
                        ": cannot parse number '" + std::string(f) + "'");
      }
      data.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw DataError(path.string() + ": no data rows");
  return Matrix(rows, cols, std::move(data));
}

void write_delimited_matrix(const fs::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot open for writing");
  char buf[32];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
      out << (c ? " " : "") << buf;
    }
    out << '\n';
  }
}

std::vector<std::string> read_label_file(const fs::path& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 1) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected one label per line");
    }
    out.emplace_back(fields[0]);
  }
  return out;
}

Label label_from_strings(const std::vector<std::string>& raw) {
  const bool numeric = std::all_of(raw.begin(), raw.end(), is_integer);
  std::vector<std::string> names(raw.begin(), raw.end());
  std::sort(names.begin(), names.end(), [&](const std::string& a, const std::string& b) {
    return numeric ? std::stoll(a) < std::stoll(b) : a < b;
  });
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<int>(i);
  Label lab{{}, names};
  for (const auto& r : raw) lab.classes.push_back(index.at(r));
  return lab;
}

SplitDataset load_har(const fs::path& dir_in) {
  fs::path dir = dir_in;
  if (!fs::exists(dir / "train") && fs::exists(dir / "UCI HAR Dataset")) dir /= "UCI HAR Dataset";
  if (!fs::is_directory(dir)) throw DataError(dir.string() + ": HAR directory not found");

  std::map<int, std::string> activity_names;
  if (fs::exists(dir / "activity_labels.txt")) {
    std::ifstream in = open_or_throw(dir / "activity_labels.txt");
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      int code;
      std::string name;
      if (ls >> code >> name) activity_names[code] = name;
    }
  }

  struct Side {
    Matrix x;
    std::vector<int> activity, subject;
  };
  auto read_side = [&](const std::string& side) {
    const fs::path base = dir / side;
    Side s;
    const fs::path x_path = base / ("X_" + side + ".txt");
    const fs::path y_path = base / ("y_" + side + ".txt");
    const fs::path subj_path = base / ("subject_" + side + ".txt");
    for (const auto& p : {x_path, y_path, subj_path}) {
      if (!fs::is_regular_file(p)) throw DataError(p.string() + ": missing file");
    }
    s.x = read_delimited_matrix(x_path);
    s.activity = read_int_column(y_path);
    s.subject = read_int_column(subj_path);
    if (s.activity.size() != s.x.rows() || s.subject.size() != s.x.rows()) {
      throw DataError(base.string() + ": label files do not match " +
                      std::to_string(s.x.rows()) + " feature rows");
    }
    return s;
  };
  Side train = read_side("train");
  Side test = read_side("test");
  if (train.x.cols() != test.x.cols()) {
    throw DataError(dir.string() + ": train has " + std::to_string(train.x.cols()) +
                    " features, test has " + std::to_string(test.x.cols()));
  }

  std::set<int> activities(train.activity.begin(), train.activity.end());
  activities.insert(test.activity.begin(), test.activity.end());
  std::set<int> subjects(train.subject.begin(), train.subject.end());
  subjects.insert(test.subject.begin(), test.subject.end());

  auto build = [&](Side& s, const std::string& side) {
    Dataset ds;
    ds.features = std::move(s.x);
    ds.labels["activity"] = label_from_codes(s.activity, activities, activity_names);
    ds.labels["subject"] = label_from_codes(s.subject, subjects, {});
    for (std::size_t i = 0; i < ds.num_samples(); ++i)
      ds.sample_ids.push_back(side + ":" + std::to_string(i));
    return ds;
  };
  SplitDataset out{build(train, "train"), build(test, "test")};
  validate(out);
  return out;
}

bool parse_cmu_face_name(const std::string& filename, CmuFaceName* out) {
  static const std::set<std::string> kPoses = {"straight", "left", "right", "up"};
  static const std::set<std::string> kExpressions = {"neutral", "happy", "sad", "angry"};
  if (filename.size() < 5 || filename.substr(filename.size() - 4) != ".pgm") return false;
  std::vector<std::string> parts;
  std::stringstream ss(filename.substr(0, filename.size() - 4));
  std::string part;
  while (std::getline(ss, part, '_')) parts.push_back(part);
  CmuFaceName name;
  if (parts.size() == 5) {
    if (parts[4] == "2") name.scale = 2;
    else if (parts[4] == "4") name.scale = 4;
    else return false;
  } else if (parts.size() != 4) {
    return false;
  }
  if (parts[0].empty() || !kPoses.count(parts[1]) || !kExpressions.count(parts[2])) return false;
  if (parts[3] != "open" && parts[3] != "sunglasses") return false;
  name.person = parts[0];
  name.pose = parts[1];
  name.expression = parts[2];
  name.sunglasses = parts[3] == "sunglasses";
  *out = name;
  return true;
}

Dataset load_cmu_faces(const fs::path& dir, LoadStats* stats) {
  if (!fs::is_directory(dir)) throw DataError(dir.string() + ": CMU Faces directory not found");
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError(dir.string() + ": no PGM files found");

  static const std::vector<std::string> kPoses = {"straight", "left", "right", "up"};
  static const std::vector<std::string> kExpressions = {"neutral", "happy", "sad", "angry"};
  auto index_of = [](const std::vector<std::string>& v, const std::string& s) {
    return static_cast<int>(std::find(v.begin(), v.end(), s) - v.begin());
  };

  LoadStats local;
  std::vector<double> pixels;
  std::vector<CmuFaceName> names;
  std::vector<std::string> ids;
  for (const auto& path : files) {
    CmuFaceName name;
    if (!parse_cmu_face_name(path.filename().string(), &name) || name.scale != 4) continue;
    GrayImage img;
    try {
      img = read_pgm(path);
    } catch (const PixelDataError& e) {
      ++local.skipped;
      local.warnings.push_back(e.what());
      continue;
    }
    if (img.width != kCmuWidth || img.height != kCmuHeight) {
      ++local.skipped;
      local.warnings.push_back(path.string() + ": expected " + std::to_string(kCmuWidth) + "x" +
                               std::to_string(kCmuHeight) + ", found " +
                               std::to_string(img.width) + "x" + std::to_string(img.height));
      continue;
    }
    pixels.insert(pixels.end(), img.pixels.begin(), img.pixels.end());
    names.push_back(name);
    ids.push_back(path.stem().string());
  }
  if (names.empty()) throw DataError(dir.string() + ": no usable quarter-scale PGM files found");

  std::set<std::string> people;
  for (const auto& n : names) people.insert(n.person);
  const std::vector<std::string> person_names(people.begin(), people.end());

  Dataset ds;
  ds.features = Matrix(names.size(), static_cast<std::size_t>(kCmuWidth) * kCmuHeight,
                       std::move(pixels));
  Label pose{{}, kPoses}, glasses{{}, {"no", "yes"}}, person{{}, person_names},
      expression{{}, kExpressions};
  for (const auto& n : names) {
    pose.classes.push_back(index_of(kPoses, n.pose));
    glasses.classes.push_back(n.sunglasses ? 1 : 0);
    person.classes.push_back(index_of(person_names, n.person));
    expression.classes.push_back(index_of(kExpressions, n.expression));
  }
  ds.labels["pose"] = std::move(pose);
  ds.labels["sunglasses"] = std::move(glasses);
  ds.labels["person"] = std::move(person);
  ds.labels["expression"] = std::move(expression);
  ds.sample_ids = std::move(ids);
  validate(ds, false);
  if (stats) *stats = std::move(local);
  return ds;
}

Dataset load_semeion(const fs::path& file) {
  constexpr std::size_t kPixels = 256;
  constexpr std::size_t kDigits = 10;
  std::ifstream in = open_or_throw(file);
  std::vector<double> data;
  Label digit{{}, {"0", "1", "2", "3", "4", "5", "6", "7", "8", "9"}};
  std::vector<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    const std::string where = file.string() + ":" + std::to_string(line_no);
    if (fields.size() != kPixels + kDigits) {
      throw DataError(where + ": expected " + std::to_string(kPixels + kDigits) +
                      " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < kPixels; ++i) {
      double v;
      if (!parse_double(fields[i], &v)) {
        throw DataError(where + ": cannot parse number '" + std::string(fields[i]) + "'");
      }
      data.push_back(v);
    }
    int hot = -1, sum = 0;
    for (std::size_t d = 0; d < kDigits; ++d) {
      double v;
      if (!parse_double(fields[kPixels + d], &v) || (v != 0.0 && v != 1.0)) {
        throw DataError(where + ": malformed label: one-hot entry '" +
                        std::string(fields[kPixels + d]) + "'");
      }
      if (v == 1.0) {
        hot = static_cast<int>(d);
        ++sum;
      }
    }
    if (sum != 1) {
      throw DataError(where + ": malformed label: one-hot block sums to " + std::to_string(sum));
    }
    digit.classes.push_back(hot);
    ids.push_back("line:" + std::to_string(line_no));
  }
  if (ids.empty()) throw DataError(file.string() + ": no samples");
  Dataset ds;
  ds.features = Matrix(ids.size(), kPixels, std::move(data));
  ds.labels["digit"] = std::move(digit);
  ds.sample_ids = std::move(ids);
  validate(ds, false);
  return ds;
}

void standardize_features(SplitDataset& split) {
  Matrix& train = split.train.features;
  const std::size_t m = train.cols();
  const double n = static_cast<double>(train.rows());
  std::vector<double> mean(m, 0.0), sd(m, 0.0);
  for (std::size_t r = 0; r < train.rows(); ++r)
    for (std::size_t c = 0; c < m; ++c) mean[c] += train(r, c) / n;
  for (std::size_t r = 0; r < train.rows(); ++r)
    for (std::size_t c = 0; c < m; ++c) sd[c] += std::pow(train(r, c) - mean[c], 2) / n;
  for (double& s : sd) s = std::sqrt(s);
  for (Matrix* x : {&split.train.features, &split.test.features}) {
    for (std::size_t r = 0; r < x->rows(); ++r)
      for (std::size_t c = 0; c < m; ++c) {
        double& v = (*x)(r, c);
        v -= mean[c];
        if (sd[c] > 0.0) v /= sd[c];
      }
  }
}

}  // namespace desense
