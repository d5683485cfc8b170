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

#ifndef DESENSE_TESTS_FIXTURES_H_
#define DESENSE_TESTS_FIXTURES_H_

// Small on-disk stand-ins for the three public datasets, in their published
// layouts, plus in-memory Gaussian class data.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "desense/dataset.h"
#include "desense/matrix.h"
#include "oracles.h"

namespace desense::testing {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& tag = "desense") {
    static std::atomic<int> counter{0};
    const auto stamp = std::random_device{}();
    path_ = fs::temp_directory_path() /
            (tag + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

struct HarFixture {
  int subjects = 6;
  int activities = 3;
  int features = 10;
  int per_pair_train = 8;  // samples per (subject, activity) on each side
  int per_pair_test = 2;
  std::uint64_t seed = 11;
};

// "<root>/UCI HAR Dataset/{train,test}/..." with features that carry both an
// activity and a subject offset.
inline void write_har(const fs::path& root, const HarFixture& f = {}) {
  const fs::path dir = root / "UCI HAR Dataset";
  std::mt19937_64 rng(f.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::vector<double>> act(f.activities), subj(f.subjects);
  for (auto& v : act) {
    v.resize(f.features);
    for (double& x : v) x = 3.0 * noise(rng);
  }
  for (auto& v : subj) {
    v.resize(f.features);
    for (double& x : v) x = 2.0 * noise(rng);
  }
  std::string labels;
  for (int a = 1; a <= f.activities; ++a) labels += std::to_string(a) + " ACT_" + std::to_string(a) + "\n";
  write_file(dir / "activity_labels.txt", labels);

  for (const std::string side : {"train", "test"}) {
    const int per = side == "train" ? f.per_pair_train : f.per_pair_test;
    std::string xs, ys, ss;
    char buf[32];
    for (int s = 0; s < f.subjects; ++s) {
      for (int a = 0; a < f.activities; ++a) {
        for (int k = 0; k < per; ++k) {
          for (int j = 0; j < f.features; ++j) {
            std::snprintf(buf, sizeof buf, "%s%.8e", j ? " " : "  ",
                          act[a][j] + subj[s][j] + noise(rng));
            xs += buf;
          }
          xs += "\n";
          ys += std::to_string(a + 1) + "\n";
          ss += std::to_string(s + 1) + "\n";
        }
      }
    }
    write_file(dir / side / ("X_" + side + ".txt"), xs);
    write_file(dir / side / ("y_" + side + ".txt"), ys);
    write_file(dir / side / ("subject_" + side + ".txt"), ss);
  }
}

inline std::string pgm_p5(int width, int height, const std::vector<unsigned char>& px) {
  std::string s = "P5\n# fixture\n" + std::to_string(width) + " " + std::to_string(height) +
                  "\n255\n";
  s.append(px.begin(), px.end());
  return s;
}

inline std::string pgm_p2(int width, int height, const std::vector<unsigned char>& px) {
  std::string s = "P2\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  for (std::size_t i = 0; i < px.size(); ++i) {
    s += std::to_string(px[i]);
    s += (i + 1) % static_cast<std::size_t>(width) == 0 ? "\n" : " ";
  }
  return s;
}

struct CmuFixture {
  std::vector<std::string> people = {"an2i", "bpm", "ch4f"};
  std::vector<std::string> expressions = {"neutral", "happy"};
  bool add_decoys = true;  // a full-scale file and an unreadable _4 file
  std::uint64_t seed = 5;
};

inline const std::vector<std::string>& cmu_poses() {
  static const std::vector<std::string> kPoses = {"straight", "left", "right", "up"};
  return kPoses;
}

// "<root>/faces/<person>/<person>_<pose>_<expr>_<open|sunglasses>_4.pgm".
// Pose shifts a bright block sideways or up; sunglasses darken a band.
inline void write_cmu(const fs::path& root, const CmuFixture& f = {}) {
  constexpr int kW = 32, kH = 30;
  std::mt19937_64 rng(f.seed);
  std::uniform_int_distribution<int> jitter(-12, 12);
  for (std::size_t p = 0; p < f.people.size(); ++p) {
    const std::string& person = f.people[p];
    for (std::size_t pose = 0; pose < cmu_poses().size(); ++pose) {
      for (const auto& expr : f.expressions) {
        for (int glasses = 0; glasses < 2; ++glasses) {
          std::vector<unsigned char> px(kW * kH);
          const int dx = pose == 1 ? -6 : pose == 2 ? 6 : 0;
          const int dy = pose == 3 ? -5 : 0;
          for (int r = 0; r < kH; ++r) {
            for (int c = 0; c < kW; ++c) {
              int v = 60 + 20 * static_cast<int>(p) + jitter(rng);
              if (std::abs(c - 16 - dx) < 7 && std::abs(r - 15 - dy) < 8) v += 90;
              if (glasses && r >= 10 + dy && r < 14 + dy) v -= 70;
              px[static_cast<std::size_t>(r * kW + c)] =
                  static_cast<unsigned char>(std::clamp(v, 0, 255));
            }
          }
          const std::string stem = person + "_" + cmu_poses()[pose] + "_" + expr + "_" +
                                   (glasses ? "sunglasses" : "open");
          write_file(root / "faces" / person / (stem + "_4.pgm"), pgm_p5(kW, kH, px));
        }
      }
    }
  }
  if (f.add_decoys) {
    const std::string& person = f.people.front();
    write_file(root / "faces" / person / (person + "_up_sad_open.pgm"),
               pgm_p5(128, 120, std::vector<unsigned char>(128 * 120, 9)));
    write_file(root / "faces" / person / (person + "_up_sad_open_4.pgm"),
               "P5\n32 30\n255\n" + std::string(100, '\x10'));
  }
}

// Per-digit prototypes on the 16x16 grid with 8% of the bits flipped.
inline std::string semeion_text(int per_digit, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution flip(0.08), on(0.3);
  std::vector<std::vector<int>> proto(10, std::vector<int>(256));
  for (auto& p : proto)
    for (int& b : p) b = on(rng) ? 1 : 0;
  std::string text;
  for (int k = 0; k < per_digit; ++k) {
    for (int d = 0; d < 10; ++d) {
      for (int j = 0; j < 256; ++j) {
        const int bit = flip(rng) ? 1 - proto[d][j] : proto[d][j];
        text += bit ? "1.0000 " : "0.0000 ";
      }
      for (int j = 0; j < 10; ++j) text += j == d ? "1 " : "0 ";
      text += "\n";
    }
  }
  return text;
}

inline void write_semeion(const fs::path& root, int per_digit = 12, std::uint64_t seed = 3) {
  write_file(root / "semeion.data", semeion_text(per_digit, seed));
}

// All three datasets under one root, the way DESENSE_DATA_DIR is laid out.
inline void write_all(const fs::path& root) {
  write_har(root);
  write_cmu(root);
  write_semeion(root);
}

// Gaussian data: x = sum over labels of the class offset + unit noise.
// offsets[k][c] is the M-vector added for class c of label k.
struct GaussianLabel {
  std::string name;
  std::vector<std::vector<double>> offsets;
};

inline Dataset gaussian_dataset(std::size_t n, std::size_t m,
                                const std::vector<GaussianLabel>& labels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Dataset ds;
  ds.features = Matrix(n, m);
  for (const auto& label_spec : labels) {
    Label l;
    for (std::size_t c = 0; c < label_spec.offsets.size(); ++c) l.class_names.push_back(std::to_string(c));
    ds.labels[label_spec.name] = l;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) ds.features(i, j) = noise(rng);
    // Cycling through classes keeps every label balanced and, for coprime
    // class counts, independent of the others.
    for (const auto& label_spec : labels) {
      const std::size_t c = i % label_spec.offsets.size();
      ds.labels[label_spec.name].classes.push_back(static_cast<int>(c));
      for (std::size_t j = 0; j < m; ++j) ds.features(i, j) += label_spec.offsets[c][j];
    }
  }
  return ds;
}

inline Dense to_dense(const Matrix& m) {
  Dense d(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m(i, j);
  return d;
}

struct RdcaProblem {
  Matrix x;
  std::vector<int> y;
  int classes = 0;
};

// Class means spread over a few axes plus anisotropic noise. Every class
// gets at least two samples.
inline RdcaProblem random_rdca_problem(std::mt19937_64& rng) {
  RdcaProblem p;
  const std::size_t m = 2 + rng() % 11;
  p.classes = 2 + static_cast<int>(rng() % 3);
  const std::size_t n = 2 * static_cast<std::size_t>(p.classes) + rng() % 25;
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> means(static_cast<std::size_t>(p.classes),
                                         std::vector<double>(m));
  for (auto& mu : means)
    for (double& v : mu) v = 2.0 * g(rng);
  std::vector<double> spread(m);
  for (double& s : spread) s = 0.2 + std::abs(g(rng));
  p.x = Matrix(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % static_cast<std::size_t>(p.classes));
    p.y.push_back(c);
    for (std::size_t j = 0; j < m; ++j)
      p.x(i, j) = means[static_cast<std::size_t>(c)][j] + spread[j] * g(rng);
  }
  return p;
}

// Largest distance from a class centroid to the grand centroid, over the
// rows of z, and the RMS row norm of z for scale.
inline std::pair<double, double> centroid_spread(const Matrix& z, std::span<const int> y,
                                                int classes) {
  std::vector<std::vector<double>> sums(static_cast<std::size_t>(classes),
                                        std::vector<double>(z.cols(), 0.0));
  std::vector<double> counts(static_cast<std::size_t>(classes), 0.0), grand(z.cols(), 0.0);
  double rms = 0.0;
  for (std::size_t i = 0; i < z.rows(); ++i) {
    for (std::size_t j = 0; j < z.cols(); ++j) {
      sums[static_cast<std::size_t>(y[i])][j] += z(i, j);
      grand[j] += z(i, j);
      rms += z(i, j) * z(i, j);
    }
    counts[static_cast<std::size_t>(y[i])] += 1.0;
  }
  double worst = 0.0;
  for (std::size_t c = 0; c < sums.size(); ++c) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < z.cols(); ++j) {
      const double diff = sums[c][j] / counts[c] - grand[j] / static_cast<double>(z.rows());
      d2 += diff * diff;
    }
    worst = std::max(worst, std::sqrt(d2));
  }
  return {worst, std::sqrt(rms / static_cast<double>(z.rows()))};
}

}  // namespace desense::testing

#endif  // DESENSE_TESTS_FIXTURES_H_
