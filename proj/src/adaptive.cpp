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

#include "dppix/adaptive.hpp"

#include <algorithm>
#include <stdexcept>

#include "dppix/errors.hpp"
#include "dppix/parallel.hpp"

namespace dppix {

int RegionClassification::simple_count() const {
  return static_cast<int>(
      std::count(is_simple.begin(), is_simple.end(), std::uint8_t{1}));
}

bool simple_from_mean(float mask_mean) {
  return mask_mean > 0.5f;
}

RegionClassification classify_regions(const RegionMask& mask,
                                      const GridGeometry& geom) {
  if (mask.height < 1 || mask.width < 1 ||
      mask.values.size() !=
          static_cast<std::size_t>(mask.height) * mask.width) {
    throw std::invalid_argument("classify_regions: malformed mask");
  }
  const GridGeometry expected = grid_dims(mask.height, mask.width, geom.b);
  if (geom != expected) {
    throw std::invalid_argument(
        "classify_regions: geometry does not match mask dimensions");
  }
  RegionMask padded_storage;
  if (geom.pad_rows != 0 || geom.pad_cols != 0) {
    padded_storage = mirror_pad(mask, geom);
  }
  const RegionMask& padded =
      padded_storage.values.empty() ? mask : padded_storage;
  RegionClassification cls;
  cls.geometry = geom;
  cls.mask_means.resize(geom.grid_count());
  cls.is_simple.resize(geom.grid_count());
  for (int g = 0; g < geom.grid_count(); ++g) {
    const int r = g / geom.grid_cols;
    const int c = g % geom.grid_cols;
    const float mean =
        static_cast<float>(mask_grid_mean(padded, geom, r, c));
    cls.mask_means[g] = mean;
    cls.is_simple[g] = simple_from_mean(mean) ? 1 : 0;
  }
  return cls;
}

namespace {

// Sum over the s x s block with top-left corner (i0, j0) of the padded image.
std::uint64_t block_sum(const GrayImage& padded, int i0, int j0, int s) {
  std::uint64_t sum = 0;
  for (int i = i0; i < i0 + s; ++i) {
    const std::uint8_t* row = padded.row(i) + j0;
    for (int j = 0; j < s; ++j) {
      sum += row[j];
    }
  }
  return sum;
}

double noise_for(const std::optional<NoiseSeed>& seed, const NoiseKey& key,
                 double sigma) {
  return seed ? laplace_at(*seed, key, sigma) : 0.0;
}

}  // namespace

AdaptiveResult pixelize_adaptive(const GrayImage& img, const RegionMask& mask,
                                 const PrivacyParams& params,
                                 const std::optional<NoiseSeed>& seed,
                                 int threads) {
  if (img.height < 1 || img.width < 1 ||
      img.pixels.size() !=
          static_cast<std::size_t>(img.height) * img.width) {
    throw std::invalid_argument("pixelize_adaptive: malformed image");
  }
  if (mask.height != img.height || mask.width != img.width) {
    throw std::invalid_argument(
        "pixelize_adaptive: mask dimensions do not match image");
  }
  if (params.n < 1 || params.b % params.n != 0 ||
      params.subgrid_side * params.n != params.b) {
    throw std::invalid_argument("pixelize_adaptive: invalid subgrid factor");
  }
  const GridGeometry geom = grid_dims(img.height, img.width, params.b);
  // As in the uniform path, the pad is the identity when grids tile exactly.
  GrayImage padded_storage;
  if (geom.pad_rows != 0 || geom.pad_cols != 0) {
    padded_storage = mirror_pad(img, geom);
  }
  const GrayImage& padded = padded_storage.pixels.empty() ? img
                                                          : padded_storage;
  const int workers = resolve_thread_count(threads);
  const int b = params.b;
  const int n = params.n;
  const int sb = params.subgrid_side;

  AdaptiveMeans means;
  means.geometry = geom;
  means.n = n;
  means.classification = classify_regions(mask, geom);

  // Exclusive scans give each grid a fixed slot in the packed mean arrays,
  // so parallel chunks write disjoint ranges.
  const int grids = geom.grid_count();
  std::vector<int> simple_slot(grids, 0);
  std::vector<int> complex_slot(grids, 0);
  int simple_total = 0;
  int complex_total = 0;
  for (int g = 0; g < grids; ++g) {
    simple_slot[g] = simple_total;
    complex_slot[g] = complex_total;
    if (means.classification.is_simple[g]) {
      ++simple_total;
    } else {
      ++complex_total;
    }
  }
  means.simple_means.resize(simple_total);
  means.complex_submeans.resize(static_cast<std::size_t>(complex_total) * n *
                                n);

  parallel_for(grids, workers, [&](int begin, int end) {
    for (int g = begin; g < end; ++g) {
      const int r = g / geom.grid_cols;
      const int c = g % geom.grid_cols;
      if (means.classification.is_simple[g]) {
        const double mean = grid_mean(padded, geom, r, c);
        const NoiseKey key{static_cast<std::uint32_t>(r),
                           static_cast<std::uint32_t>(c), 0, 0};
        means.simple_means[simple_slot[g]] = quantize_intensity(
            clip_intensity(mean + noise_for(seed, key, params.sigma)));
      } else {
        std::uint8_t* out =
            means.complex_submeans.data() +
            static_cast<std::size_t>(complex_slot[g]) * n * n;
        for (int sr = 0; sr < n; ++sr) {
          for (int sc = 0; sc < n; ++sc) {
            const std::uint64_t sum =
                block_sum(padded, r * b + sr * sb, c * b + sc * sb, sb);
            const double mean = static_cast<double>(sum) /
                                (static_cast<double>(sb) * sb);
            const NoiseKey key{static_cast<std::uint32_t>(r),
                               static_cast<std::uint32_t>(c),
                               static_cast<std::uint32_t>(sr),
                               static_cast<std::uint32_t>(sc)};
            out[sr * n + sc] = quantize_intensity(clip_intensity(
                mean + noise_for(seed, key, params.sigma_sub)));
          }
        }
      }
    }
  });

  AdaptiveResult result;
  result.image = reassemble(means, img.height, img.width);
  result.means = std::move(means);
  return result;
}

GrayImage reassemble(const AdaptiveMeans& means, int height, int width) {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("reassemble: dimensions must be >= 1");
  }
  const GridGeometry geom = means.geometry;
  const GridGeometry expected = grid_dims(height, width, geom.b);
  if (geom != expected) {
    throw std::invalid_argument(
        "reassemble: geometry does not match the target dimensions");
  }
  const int n = means.n;
  if (n < 1 || geom.b % n != 0) {
    throw RecordError(RecordErrorKind::corrupt_record,
                      "reassemble: subgrid factor does not divide grid side");
  }
  const int grids = geom.grid_count();
  const RegionClassification& cls = means.classification;
  if (cls.geometry != geom ||
      cls.mask_means.size() != static_cast<std::size_t>(grids) ||
      cls.is_simple.size() != static_cast<std::size_t>(grids)) {
    throw RecordError(RecordErrorKind::corrupt_record,
                      "reassemble: classification length mismatch");
  }
  const int simple_total = cls.simple_count();
  if (means.simple_means.size() != static_cast<std::size_t>(simple_total) ||
      means.complex_submeans.size() !=
          static_cast<std::size_t>(grids - simple_total) * n * n) {
    throw RecordError(RecordErrorKind::corrupt_record,
                      "reassemble: mean array length mismatch");
  }

  const int b = geom.b;
  const int sb = b / n;
  GrayImage out = make_image(height, width);
  int simple_at = 0;
  int complex_at = 0;
  for (int g = 0; g < grids; ++g) {
    const int r = g / geom.grid_cols;
    const int c = g % geom.grid_cols;
    const int i0 = r * b;
    const int j0 = c * b;
    const int h = std::min(b, height - i0);
    const int w = std::min(b, width - j0);
    if (cls.is_simple[g]) {
      const std::uint8_t value = means.simple_means[simple_at++];
      for (int i = i0; i < i0 + h; ++i) {
        std::uint8_t* row = out.row(i);
        std::fill(row + j0, row + j0 + w, value);
      }
    } else {
      const std::uint8_t* sub =
          means.complex_submeans.data() +
          static_cast<std::size_t>(complex_at++) * n * n;
      for (int i = i0; i < i0 + h; ++i) {
        const std::uint8_t* sub_row = sub + ((i - i0) / sb) * n;
        std::uint8_t* row = out.row(i);
        for (int sc = 0; sc < n && sc * sb < w; ++sc) {
          const int jj0 = j0 + sc * sb;
          std::fill(row + jj0, row + std::min(j0 + w, jj0 + sb), sub_row[sc]);
        }
      }
    }
  }
  return out;
}

}  // namespace dppix
