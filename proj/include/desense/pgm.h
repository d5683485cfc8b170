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

#ifndef DESENSE_PGM_H_
#define DESENSE_PGM_H_

#include <filesystem>
#include <vector>

#include "desense/error.h"

namespace desense {

struct GrayImage {
  int width = 0;
  int height = 0;
  int max_gray = 0;
  std::vector<double> pixels;  // row-major, raw gray levels
};

// The header parsed but the raster is truncated or out of range.
class PixelDataError : public DataError {
 public:
  using DataError::DataError;
};

// Parses a P2 (ASCII) or P5 (binary) PGM; header comments are skipped.
// Throws DataError naming the file for a malformed header and
// PixelDataError for a bad raster. 16-bit P5 rasters are read big-endian.
GrayImage read_pgm(const std::filesystem::path& path);

void write_pgm(const std::filesystem::path& path, const GrayImage& image, bool binary);

}  // namespace desense

#endif  // DESENSE_PGM_H_
