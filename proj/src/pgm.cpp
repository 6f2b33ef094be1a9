// Copyright 2026 The dppix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dppix/pgm.hpp"

#include <fstream>
#include <limits>

#include "dppix/errors.hpp"

namespace dppix {

namespace {

// Skips whitespace and '#' comments, then reads one decimal token.
int read_header_int(std::istream& in, const std::string& path,
                    const char* field) {
  for (;;) {
    const int ch = in.peek();
    if (ch == std::char_traits<char>::eof()) {
      throw IoError("read_pgm: truncated header in " + path);
    }
    if (ch == '#') {
      in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
      continue;
    }
    if (std::isspace(ch)) {
      in.get();
      continue;
    }
    break;
  }
  long long value = 0;
  if (!(in >> value) || value < 0) {
    throw IoError("read_pgm: bad " + std::string(field) + " in " + path);
  }
  if (value > std::numeric_limits<int>::max()) {
    throw IoError("read_pgm: " + std::string(field) + " overflows in " + path);
  }
  return static_cast<int>(value);
}

GrayImage read_pgm_stream(std::istream& in, const std::string& path) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') {
    throw IoError("read_pgm: not a binary PGM (P5): " + path);
  }
  const int width = read_header_int(in, path, "width");
  const int height = read_header_int(in, path, "height");
  const int maxval = read_header_int(in, path, "maxval");
  if (width < 1 || height < 1) {
    throw IoError("read_pgm: non-positive dimensions in " + path);
  }
  if (maxval != 255) {
    throw IoError("read_pgm: unsupported maxval (expected 255) in " + path);
  }
  // Exactly one whitespace byte separates the header from the raster.
  const int sep = in.get();
  if (sep == std::char_traits<char>::eof() || !std::isspace(sep)) {
    throw IoError("read_pgm: missing raster separator in " + path);
  }
  GrayImage img = make_image(height, width);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != img.pixels.size()) {
    throw IoError("read_pgm: truncated pixel data in " + path);
  }
  return img;
}

}  // namespace

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("read_pgm: cannot open " + path);
  }
  return read_pgm_stream(in, path);
}

void write_pgm(const GrayImage& img, const std::string& path) {
  if (img.height < 1 || img.width < 1 ||
      img.pixels.size() !=
          static_cast<std::size_t>(img.height) * img.width) {
    throw IoError("write_pgm: malformed image for " + path);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("write_pgm: cannot open " + path);
  }
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  out.flush();
  if (!out) {
    throw IoError("write_pgm: write failed for " + path);
  }
}

RegionMask read_mask_pgm(const std::string& path) {
  const GrayImage img = read_pgm(path);
  RegionMask mask = make_mask(img.height, img.width, 0);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    mask.values[i] = img.pixels[i] >= 128 ? 1 : 0;
  }
  return mask;
}

}  // namespace dppix
