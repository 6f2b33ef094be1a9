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

#include "dppix/image.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace dppix {

GrayImage make_image(int height, int width, std::uint8_t fill) {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("make_image: dimensions must be >= 1");
  }
  GrayImage img;
  img.height = height;
  img.width = width;
  img.pixels.assign(static_cast<std::size_t>(height) * width, fill);
  return img;
}

RegionMask make_mask(int height, int width, std::uint8_t fill) {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("make_mask: dimensions must be >= 1");
  }
  if (fill > 1) {
    throw std::invalid_argument("make_mask: mask values must be 0 or 1");
  }
  RegionMask mask;
  mask.height = height;
  mask.width = width;
  mask.values.assign(static_cast<std::size_t>(height) * width, fill);
  return mask;
}

GridGeometry grid_dims(int height, int width, int b) {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("grid_dims: dimensions must be >= 1");
  }
  if (b < 1) {
    throw std::invalid_argument("grid_dims: grid side b must be >= 1");
  }
  if (b > std::max(height, width)) {
    throw std::invalid_argument(
        "grid_dims: grid side b exceeds both image dimensions");
  }
  // 64-bit intermediates: height + b and grid_rows * b can exceed int range
  // for hostile header values even though the results always fit.
  GridGeometry geom;
  geom.b = b;
  geom.grid_rows =
      static_cast<int>((static_cast<long long>(height) + b - 1) / b);
  geom.grid_cols =
      static_cast<int>((static_cast<long long>(width) + b - 1) / b);
  geom.pad_rows =
      static_cast<int>(static_cast<long long>(geom.grid_rows) * b - height);
  geom.pad_cols =
      static_cast<int>(static_cast<long long>(geom.grid_cols) * b - width);
  return geom;
}

namespace {

void check_geom_matches(const GridGeometry& geom, int height, int width,
                        const char* who) {
  if (geom.b < 1 || geom.padded_height() != height + geom.pad_rows ||
      geom.padded_width() != width + geom.pad_cols ||
      geom.pad_rows < 0 || geom.pad_rows >= geom.b || geom.pad_cols < 0 ||
      geom.pad_cols >= geom.b) {
    throw std::invalid_argument(std::string(who) +
                                ": geometry does not match image dimensions");
  }
}

// Shared reflection: rows are appended first, then columns, so the corner
// block ends up reflected in both axes.
template <typename T>
std::vector<T> mirror_pad_buffer(const std::vector<T>& src, int height,
                                 int width, const GridGeometry& geom,
                                 const char* who) {
  check_geom_matches(geom, height, width, who);
  if (geom.pad_rows >= height || geom.pad_cols >= width) {
    throw std::invalid_argument(
        std::string(who) + ": padding exceeds image size, reflection source "
                           "out of range (use b <= min(M, N))");
  }
  const int out_h = geom.padded_height();
  const int out_w = geom.padded_width();
  std::vector<T> out(static_cast<std::size_t>(out_h) * out_w);
  for (int i = 0; i < out_h; ++i) {
    const int si = i < height ? i : height - 1 - (i - height);
    const T* src_row = src.data() + static_cast<std::size_t>(si) * width;
    T* out_row = out.data() + static_cast<std::size_t>(i) * out_w;
    std::memcpy(out_row, src_row, static_cast<std::size_t>(width) * sizeof(T));
    for (int j = width; j < out_w; ++j) {
      out_row[j] = src_row[width - 1 - (j - width)];
    }
  }
  return out;
}

}  // namespace

GrayImage mirror_pad(const GrayImage& img, const GridGeometry& geom) {
  GrayImage out;
  out.pixels =
      mirror_pad_buffer(img.pixels, img.height, img.width, geom, "mirror_pad");
  out.height = geom.padded_height();
  out.width = geom.padded_width();
  return out;
}

RegionMask mirror_pad(const RegionMask& mask, const GridGeometry& geom) {
  RegionMask out;
  out.values =
      mirror_pad_buffer(mask.values, mask.height, mask.width, geom,
                        "mirror_pad");
  out.height = geom.padded_height();
  out.width = geom.padded_width();
  return out;
}

GrayImage crop(const GrayImage& img, int height, int width) {
  if (height < 1 || width < 1 || height > img.height || width > img.width) {
    throw std::invalid_argument("crop: target size out of range");
  }
  if (height == img.height && width == img.width) {
    return img;
  }
  GrayImage out;
  out.height = height;
  out.width = width;
  out.pixels.resize(static_cast<std::size_t>(height) * width);
  for (int i = 0; i < height; ++i) {
    std::memcpy(out.row(i), img.row(i), static_cast<std::size_t>(width));
  }
  return out;
}

namespace {

template <typename T>
std::uint64_t tile_sum(const std::vector<T>& data, int stride,
                       const GridGeometry& geom, int r, int c,
                       const char* who) {
  if (r < 0 || r >= geom.grid_rows || c < 0 || c >= geom.grid_cols) {
    throw std::invalid_argument(std::string(who) +
                                ": grid index out of range");
  }
  const int b = geom.b;
  std::uint64_t sum = 0;
  for (int i = r * b; i < (r + 1) * b; ++i) {
    const T* row = data.data() + static_cast<std::size_t>(i) * stride + c * b;
    for (int j = 0; j < b; ++j) {
      sum += row[j];
    }
  }
  return sum;
}

}  // namespace

std::uint64_t grid_sum(const GrayImage& padded, const GridGeometry& geom,
                       int r, int c) {
  if (padded.height != geom.padded_height() ||
      padded.width != geom.padded_width()) {
    throw std::invalid_argument("grid_sum: image is not padded to geometry");
  }
  return tile_sum(padded.pixels, padded.width, geom, r, c, "grid_sum");
}

double grid_mean(const GrayImage& padded, const GridGeometry& geom, int r,
                 int c) {
  const std::uint64_t sum = grid_sum(padded, geom, r, c);
  return static_cast<double>(sum) /
         (static_cast<double>(geom.b) * geom.b);
}

double mask_grid_mean(const RegionMask& padded, const GridGeometry& geom,
                      int r, int c) {
  if (padded.height != geom.padded_height() ||
      padded.width != geom.padded_width()) {
    throw std::invalid_argument(
        "mask_grid_mean: mask is not padded to geometry");
  }
  const std::uint64_t sum =
      tile_sum(padded.values, padded.width, geom, r, c, "mask_grid_mean");
  return static_cast<double>(sum) /
         (static_cast<double>(geom.b) * geom.b);
}

}  // namespace dppix
