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

#ifndef DPPIX_ADAPTIVE_HPP_
#define DPPIX_ADAPTIVE_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "dppix/image.hpp"
#include "dppix/noise.hpp"
#include "dppix/pixelize.hpp"

namespace dppix {

// Per-grid mask means and the derived simple/complex split. Mask means are
// held at 32-bit precision end to end so classification after decode matches
// classification before encode.
struct RegionClassification {
  GridGeometry geometry;
  std::vector<float> mask_means;
  std::vector<std::uint8_t> is_simple;

  int simple_count() const;
  bool operator==(const RegionClassification&) const = default;
};

// A mask mean strictly above 0.5 marks a simple grid; ties are complex.
bool simple_from_mean(float mask_mean);

// Pads the mask by mirroring, computes per-grid mask means, and thresholds.
// Throws std::invalid_argument if the mask does not fit the geometry.
RegionClassification classify_regions(const RegionMask& mask,
                                      const GridGeometry& geom);

// Adaptive statistics: one quantized mean per simple grid (row-major grid
// order, complex grids skipped) and n*n quantized subgrid means per complex
// grid (row-major over grids, then row-major within each grid).
struct AdaptiveMeans {
  GridGeometry geometry;
  int n = 1;
  RegionClassification classification;
  std::vector<std::uint8_t> simple_means;
  std::vector<std::uint8_t> complex_submeans;

  bool operator==(const AdaptiveMeans&) const = default;
};

struct AdaptiveResult {
  GrayImage image;
  AdaptiveMeans means;
};

// Region-adaptive pixelization. Simple grids behave exactly as in
// pixelize_parallel (key (r, c, 0, 0), scale sigma). Complex grids split
// into n x n subgrids of side b / n; subgrid (sr, sc) draws noise keyed
// (r, c, sr, sc) at scale sigma_sub. A disengaged seed disables noise.
AdaptiveResult pixelize_adaptive(const GrayImage& img, const RegionMask& mask,
                                 const PrivacyParams& params,
                                 const std::optional<NoiseSeed>& seed,
                                 int threads = 0);

// Broadcast simple means over b x b blocks and submeans over (b/n) x (b/n)
// blocks, cropped to height x width. Throws RecordError(corrupt_record) on
// internal length mismatches and std::invalid_argument on dimension mismatch.
GrayImage reassemble(const AdaptiveMeans& means, int height, int width);

}  // namespace dppix

#endif  // DPPIX_ADAPTIVE_HPP_
