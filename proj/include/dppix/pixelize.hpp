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

#ifndef DPPIX_PIXELIZE_HPP_
#define DPPIX_PIXELIZE_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "dppix/image.hpp"
#include "dppix/noise.hpp"

namespace dppix {

// Quantized noisy grid means in row-major grid order.
struct GridMeans {
  GridGeometry geometry;
  std::vector<std::uint8_t> values;

  bool operator==(const GridMeans&) const = default;
};

// Clamp to the 8-bit intensity range.
double clip_intensity(double v);

// Round half away from zero. Requires v in [0, 255].
std::uint8_t quantize_intensity(double v);

// Sequential reference pixelization. Border grids of size h x w (h, w <= b)
// average only the pixels present; no padding. Noise for grid (r, c) is
// keyed (r, c, 0, 0) at scale params.sigma; a disengaged seed disables noise.
GrayImage pixelize_reference(const GrayImage& img, const PrivacyParams& params,
                             const std::optional<NoiseSeed>& seed);

struct UniformResult {
  GrayImage image;
  GridMeans means;
};

// Mirror-pad pixelization, data parallel over grids. Same noise keys and
// scale as the reference path, so outputs agree bitwise whenever b divides
// both dimensions. threads: 0 resolves via resolve_thread_count.
UniformResult pixelize_parallel(const GrayImage& img,
                                const PrivacyParams& params,
                                const std::optional<NoiseSeed>& seed,
                                int threads = 0);

// Broadcast each stored mean over its b x b block, cropped to height x width.
// Throws std::invalid_argument if means do not fit those dimensions.
GrayImage broadcast_means(const GridMeans& means, int height, int width);

}  // namespace dppix

#endif  // DPPIX_PIXELIZE_HPP_
