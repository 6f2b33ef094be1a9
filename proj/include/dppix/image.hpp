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

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dppix {

/// 8-bit grayscale raster, row-major.
struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int i, int j) const {
    return pixels[static_cast<std::size_t>(i) * width + j];
  }
  std::uint8_t& at(int i, int j) {
    return pixels[static_cast<std::size_t>(i) * width + j];
  }
  const std::uint8_t* row(int i) const {
    return pixels.data() + static_cast<std::size_t>(i) * width;
  }
  std::uint8_t* row(int i) {
    return pixels.data() + static_cast<std::size_t>(i) * width;
  }
  bool same_dims(const GrayImage& other) const {
    return height == other.height && width == other.width;
  }
  bool operator==(const GrayImage& other) const = default;
};

GrayImage make_image(int height, int width, std::uint8_t fill = 0);

/// Binary map over an image: 1 marks a simple (background) pixel,
/// 0 a complex (foreground) one.
struct RegionMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> values;  // each 0 or 1

  std::uint8_t at(int i, int j) const {
    return values[static_cast<std::size_t>(i) * width + j];
  }
  std::uint8_t& at(int i, int j) {
    return values[static_cast<std::size_t>(i) * width + j];
  }
  const std::uint8_t* row(int i) const {
    return values.data() + static_cast<std::size_t>(i) * width;
  }
  bool operator==(const RegionMask& other) const = default;
};

RegionMask make_mask(int height, int width, std::uint8_t fill = 1);

/// Partition of an M x N image into b x b tiles, padded up to whole tiles.
struct GridGeometry {
  int b = 0;          // tile side in pixels
  int grid_rows = 0;  // ceil(M / b)
  int grid_cols = 0;  // ceil(N / b)
  int pad_rows = 0;   // grid_rows * b - M, in [0, b)
  int pad_cols = 0;   // grid_cols * b - N, in [0, b)

  int grid_count() const { return grid_rows * grid_cols; }
  int padded_height() const { return grid_rows * b; }
  int padded_width() const { return grid_cols * b; }
  bool operator==(const GridGeometry& other) const = default;
};

/// Tile counts and padding for an M x N image at tile side b.
/// Requires M, N >= 1 and 1 <= b <= max(M, N).
GridGeometry grid_dims(int height, int width, int b);

/// Extends the image to (grid_rows*b) x (grid_cols*b) by edge-inclusive
/// reflection, rows first then columns: appended row M+k copies source row
/// M-1-k, appended column N+k copies column N-1-k. Fails if the reflection
/// would reach past the opposite border (pad_rows >= M or pad_cols >= N),
/// which cannot happen when b <= min(M, N).
GrayImage mirror_pad(const GrayImage& img, const GridGeometry& geom);
RegionMask mirror_pad(const RegionMask& mask, const GridGeometry& geom);

/// Top-left height x width block.
GrayImage crop(const GrayImage& img, int height, int width);

/// Exact integer pixel sum of tile (r, c) of a padded image.
std::uint64_t grid_sum(const GrayImage& padded, const GridGeometry& geom,
                       int r, int c);

/// Mean of tile (r, c): 64-bit integer sum divided once, so the result is
/// bit-reproducible regardless of traversal order or thread count.
double grid_mean(const GrayImage& padded, const GridGeometry& geom, int r,
                 int c);

/// Mean over a padded mask's tile (r, c), in [0, 1].
double mask_grid_mean(const RegionMask& padded, const GridGeometry& geom,
                      int r, int c);

}  // namespace dppix
