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

#ifndef DESENSE_LOADERS_H_
#define DESENSE_LOADERS_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "desense/dataset.h"
#include "desense/matrix.h"

namespace desense {

// Files a loader skipped instead of failing on.
struct LoadStats {
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

// Whitespace- or comma-delimited real matrix, one sample per line. Blank
// lines are ignored. Throws DataError with file and line for ragged rows or
// unparseable numbers.
Matrix read_delimited_matrix(const std::filesystem::path& path);

// Writes rows space-separated at 17 significant digits.
void write_delimited_matrix(const std::filesystem::path& path, const Matrix& m);

// One token per non-blank line.
std::vector<std::string> read_label_file(const std::filesystem::path& path);

// Builds a Label from raw string classes. Class names are ordered
// numerically when every token is an integer and lexicographically otherwise.
Label label_from_strings(const std::vector<std::string>& raw);

// UCI "Human Activity Recognition Using Smartphones" layout:
// {train,test}/{X,y,subject}_{train,test}.txt, optional activity_labels.txt.
// `dir` may also be the parent of a "UCI HAR Dataset" folder. Labels are
// "activity" and "subject"; class tables span both sides.
SplitDataset load_har(const std::filesystem::path& dir);

inline constexpr int kCmuWidth = 32;
inline constexpr int kCmuHeight = 30;

struct CmuFaceName {
  std::string person;
  std::string pose;
  std::string expression;
  bool sunglasses = false;
  int scale = 1;  // 1 full, 2 half, 4 quarter
};

// Parses <person>_<pose>_<expression>_<open|sunglasses>[_2|_4].pgm.
// Returns false for names outside that grammar.
bool parse_cmu_face_name(const std::string& filename, CmuFaceName* out);

// Recursively collects quarter-scale (_4) CMU Faces images into a dataset of
// 960 raw gray-level features with labels "pose", "sunglasses", "person" and
// "expression". Images with a bad raster or the wrong size are skipped and
// counted in `stats`; a malformed header is an error.
Dataset load_cmu_faces(const std::filesystem::path& dir, LoadStats* stats = nullptr);

// Semeion handwritten digits: 256 pixel values and a 10-entry one-hot digit
// block per line. Label "digit".
Dataset load_semeion(const std::filesystem::path& file);

// Z-scores every feature with the training mean and standard deviation;
// constant features are only centered.
void standardize_features(SplitDataset& split);

}  // namespace desense

#endif  // DESENSE_LOADERS_H_
