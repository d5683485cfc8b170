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

#include "desense/pgm.h"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

namespace desense {
namespace {

class HeaderReader {
 public:
  HeaderReader(const std::string& bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  // Next whitespace-delimited token, skipping '#' comments.
  std::string token() {
    while (pos_ < bytes_.size()) {
      const unsigned char ch = static_cast<unsigned char>(bytes_[pos_]);
      if (std::isspace(ch)) {
        ++pos_;
      } else if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() &&
           !std::isspace(static_cast<unsigned char>(bytes_[pos_])) && bytes_[pos_] != '#')
      ++pos_;
    return bytes_.substr(start, pos_ - start);
  }

  int positive_int(const char* what) {
    const std::string t = token();
    if (t.empty() || t.size() > 9 ||
        t.find_first_not_of("0123456789") != std::string::npos || std::stoi(t) <= 0) {
      throw DataError(path_.string() + ": malformed PGM header (" + what + " '" + t + "')");
    }
    return std::stoi(t);
  }

  std::size_t pos() const { return pos_; }
  void skip_single_whitespace() {
    if (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
  }

 private:
  const std::string& bytes_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  HeaderReader header(bytes, path);
  const std::string magic = header.token();
  if (magic != "P2" && magic != "P5") {
    throw DataError(path.string() + ": malformed PGM header (magic '" + magic + "')");
  }
  GrayImage img;
  img.width = header.positive_int("width");
  img.height = header.positive_int("height");
  img.max_gray = header.positive_int("max gray");
  if (img.max_gray > 65535) {
    throw DataError(path.string() + ": malformed PGM header (max gray " +
                    std::to_string(img.max_gray) + ")");
  }
  const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
  img.pixels.reserve(count);

  if (magic == "P5") {
    header.skip_single_whitespace();
    const std::size_t bpp = img.max_gray > 255 ? 2 : 1;
    if (bytes.size() - header.pos() < count * bpp) {
      throw PixelDataError(path.string() + ": truncated raster (" +
                           std::to_string(bytes.size() - header.pos()) + " bytes for " +
                           std::to_string(count) + " pixels)");
    }
    const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data() + header.pos());
    for (std::size_t i = 0; i < count; ++i) {
      const int v = bpp == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
      if (v > img.max_gray) {
        throw PixelDataError(path.string() + ": pixel " + std::to_string(i) +
                             " exceeds max gray");
      }
      img.pixels.push_back(v);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::string t = header.token();
      if (t.empty() || t.size() > 6 || t.find_first_not_of("0123456789") != std::string::npos ||
          std::stoi(t) > img.max_gray) {
        throw PixelDataError(path.string() + ": bad or missing pixel " + std::to_string(i));
      }
      img.pixels.push_back(std::stoi(t));
    }
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path.string() + ": cannot open for writing");
  out << (binary ? "P5" : "P2") << "\n" << image.width << " " << image.height << "\n"
      << image.max_gray << "\n";
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    const int v = static_cast<int>(image.pixels[i]);
    if (binary) {
      out.put(static_cast<char>(v));
    } else {
      out << v << ((i + 1) % static_cast<std::size_t>(image.width) == 0 ? '\n' : ' ');
    }
  }
}

}  // namespace desense
