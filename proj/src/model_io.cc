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

#include "desense/model_io.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "desense/error.h"

namespace desense {
namespace {

constexpr int kFormatVersion = 1;

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_reals(std::ostream& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? " " : "") << format_real(values[i]);
  out << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) fail("unexpected end of file");
    ++line_no_;
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
  }

  // "<key> <rest>" with the key checked.
  std::string keyed(const std::string& key) {
    const std::string s = line();
    if (s.rfind(key, 0) != 0 || (s.size() > key.size() && s[key.size()] != ' ')) {
      fail("expected '" + key + "'");
    }
    return s.size() > key.size() ? s.substr(key.size() + 1) : "";
  }

  std::size_t count(const std::string& key) {
    const std::string v = keyed(key);
    char* end = nullptr;
    const unsigned long long n = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0') fail("bad count for '" + key + "'");
    return static_cast<std::size_t>(n);
  }

  double real(const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0' || !std::isfinite(v)) fail("bad number '" + text + "'");
    return v;
  }

  std::vector<double> reals(const std::string& text, std::size_t expected) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
      const std::size_t next = text.find(' ', pos);
      const std::string tok = text.substr(pos, next == std::string::npos ? std::string::npos
                                                                          : next - pos);
      if (!tok.empty()) out.push_back(real(tok));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (out.size() != expected) {
      fail("expected " + std::to_string(expected) + " values, found " +
           std::to_string(out.size()));
    }
    return out;
  }

  void header(const std::string& magic) {
    const std::string s = line();
    if (s != magic + " " + std::to_string(kFormatVersion)) {
      fail("expected '" + magic + " " + std::to_string(kFormatVersion) + "' header");
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("model file line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

void write_rdca_model(std::ostream& out, const RdcaModel& model) {
  out << "desense-rdca " << kFormatVersion << '\n';
  out << "label " << model.label_name << '\n';
  out << "classes " << model.num_classes << '\n';
  for (int c = 0; c < model.num_classes; ++c) {
    out << (static_cast<std::size_t>(c) < model.class_names.size()
                ? model.class_names[static_cast<std::size_t>(c)]
                : std::to_string(c))
        << '\n';
  }
  out << "dims " << model.dims() << '\n';
  out << "ridge " << format_real(model.ridge) << '\n';
  out << "mean ";
  write_reals(out, model.mean);
  out << "powers ";
  write_reals(out, model.powers);
  out << "components\n";
  for (std::size_t r = 0; r < model.components.rows(); ++r) write_reals(out, model.components.row(r));
}

RdcaModel read_rdca_model(std::istream& in) {
  Reader r(in);
  r.header("desense-rdca");
  RdcaModel model;
  model.label_name = r.keyed("label");
  model.num_classes = static_cast<int>(r.count("classes"));
  for (int c = 0; c < model.num_classes; ++c) model.class_names.push_back(r.line());
  const std::size_t m = r.count("dims");
  model.ridge = r.real(r.keyed("ridge"));
  model.mean = r.reals(r.keyed("mean"), m);
  model.powers = r.reals(r.keyed("powers"), m);
  r.keyed("components");
  std::vector<double> data;
  data.reserve(m * m);
  for (std::size_t row = 0; row < m; ++row) {
    const auto values = r.reals(r.line(), m);
    data.insert(data.end(), values.begin(), values.end());
  }
  model.components = Matrix(m, m, std::move(data));
  return model;
}

void save_rdca_model(const std::filesystem::path& path, const RdcaModel& model) {
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot open for writing");
  write_rdca_model(out, model);
}

RdcaModel load_rdca_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": missing file");
  return read_rdca_model(in);
}

void write_svm_model(std::ostream& out, const LinearSvmModel& model) {
  out << "desense-svm " << kFormatVersion << '\n';
  out << "cost " << format_real(model.c) << '\n';
  out << "classes " << model.num_classes << '\n';
  out << "dims " << model.input_dims() << '\n';
  out << "weights\n";
  for (std::size_t r = 0; r < model.weights.rows(); ++r) write_reals(out, model.weights.row(r));
}

LinearSvmModel read_svm_model(std::istream& in) {
  Reader r(in);
  r.header("desense-svm");
  LinearSvmModel model;
  model.c = r.real(r.keyed("cost"));
  model.num_classes = static_cast<int>(r.count("classes"));
  const std::size_t d = r.count("dims");
  r.keyed("weights");
  std::vector<double> data;
  for (int k = 0; k < model.num_classes; ++k) {
    const auto values = r.reals(r.line(), d + 1);
    data.insert(data.end(), values.begin(), values.end());
  }
  model.weights = Matrix(static_cast<std::size_t>(model.num_classes), d + 1, std::move(data));
  return model;
}

}  // namespace desense
