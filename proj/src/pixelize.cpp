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

#include "dppix/pixelize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dppix/parallel.hpp"

namespace dppix {

double clip_intensity(double v) {
  return std::clamp(v, 0.0, 255.0);
}

std::uint8_t quantize_intensity(double v) {
  return static_cast<std::uint8_t>(std::llround(v));
}

namespace {

double noise_for(const std::optional<NoiseSeed>& seed, const NoiseKey& key,
                 double sigma) {
  return seed ? laplace_at(*seed, key, sigma) : 0.0;
}

void check_image(const GrayImage& img, const char* who) {
  if (img.height < 1 || img.width < 1 ||
      img.pixels.size() !=
          static_cast<std::size_t>(img.height) * img.width) {
    throw std::invalid_argument(std::string(who) + ": malformed image");
  }
}

}  // namespace

GrayImage pixelize_reference(const GrayImage& img, const PrivacyParams& params,
                             const std::optional<NoiseSeed>& seed) {
  check_image(img, "pixelize_reference");
  if (params.n != 1) {
    throw std::invalid_argument("pixelize_reference: requires n == 1");
  }
  const GridGeometry geom = grid_dims(img.height, img.width, params.b);
  GrayImage out = make_image(img.height, img.width);
  for (int r = 0; r < geom.grid_rows; ++r) {
    const int i0 = r * params.b;
    const int h = std::min(params.b, img.height - i0);
    for (int c = 0; c < geom.grid_cols; ++c) {
      const int j0 = c * params.b;
      const int w = std::min(params.b, img.width - j0);
      std::uint64_t sum = 0;
      for (int i = i0; i < i0 + h; ++i) {
        const std::uint8_t* row = img.row(i);
        for (int j = j0; j < j0 + w; ++j) {
          sum += row[j];
        }
      }
      const double mean =
          static_cast<double>(sum) / (static_cast<double>(h) * w);
      const NoiseKey key{static_cast<std::uint32_t>(r),
                         static_cast<std::uint32_t>(c), 0, 0};
      const std::uint8_t value = quantize_intensity(
          clip_intensity(mean + noise_for(seed, key, params.sigma)));
      for (int i = i0; i < i0 + h; ++i) {
        std::uint8_t* row = out.row(i);
        std::fill(row + j0, row + j0 + w, value);
      }
    }
  }
  return out;
}

UniformResult pixelize_parallel(const GrayImage& img,
                                const PrivacyParams& params,
                                const std::optional<NoiseSeed>& seed,
                                int threads) {
  check_image(img, "pixelize_parallel");
  if (params.n != 1) {
    throw std::invalid_argument("pixelize_parallel: requires n == 1");
  }
  const GridGeometry geom = grid_dims(img.height, img.width, params.b);
  // When grids already tile the image the mirror pad is the identity; skip
  // the copy and read the input directly.
  GrayImage padded_storage;
  if (geom.pad_rows != 0 || geom.pad_cols != 0) {
    padded_storage = mirror_pad(img, geom);
  }
  const GrayImage& padded = padded_storage.pixels.empty() ? img
                                                          : padded_storage;
  const int workers = resolve_thread_count(threads);

  GridMeans means;
  means.geometry = geom;
  means.values.resize(geom.grid_count());
  parallel_for(geom.grid_count(), workers, [&](int begin, int end) {
    for (int g = begin; g < end; ++g) {
      const int r = g / geom.grid_cols;
      const int c = g % geom.grid_cols;
      const double mean = grid_mean(padded, geom, r, c);
      const NoiseKey key{static_cast<std::uint32_t>(r),
                         static_cast<std::uint32_t>(c), 0, 0};
      means.values[g] = quantize_intensity(
          clip_intensity(mean + noise_for(seed, key, params.sigma)));
    }
  });

  UniformResult result;
  result.image = broadcast_means(means, img.height, img.width);
  result.means = std::move(means);
  return result;
}

GrayImage broadcast_means(const GridMeans& means, int height, int width) {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("broadcast_means: dimensions must be >= 1");
  }
  const GridGeometry expected = grid_dims(height, width, means.geometry.b);
  if (means.geometry != expected ||
      means.values.size() !=
          static_cast<std::size_t>(expected.grid_count())) {
    throw std::invalid_argument(
        "broadcast_means: means do not fit the target dimensions");
  }
  const int b = means.geometry.b;
  GrayImage out = make_image(height, width);
  for (int i = 0; i < height; ++i) {
    const std::uint8_t* grid_row =
        means.values.data() +
        static_cast<std::size_t>(i / b) * means.geometry.grid_cols;
    std::uint8_t* row = out.row(i);
    for (int c = 0; c < means.geometry.grid_cols; ++c) {
      const int j0 = c * b;
      std::fill(row + j0, row + std::min(width, j0 + b), grid_row[c]);
    }
  }
  return out;
}

}  // namespace dppix
