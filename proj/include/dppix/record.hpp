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

#ifndef DPPIX_RECORD_HPP_
#define DPPIX_RECORD_HPP_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dppix/adaptive.hpp"
#include "dppix/image.hpp"
#include "dppix/pixelize.hpp"

namespace dppix {

enum class RecordMode : std::uint8_t {
  uniform = 1,
  adaptive = 2,
};

// The persisted unit: image dimensions plus the grid statistics needed to
// rebuild the pixelized image. Privacy parameters (epsilon, m, seed) are
// deliberately not stored; a record alone must not leak the noise stream.
struct PixelRecord {
  int height = 0;
  int width = 0;
  std::variant<GridMeans, AdaptiveMeans> payload;

  RecordMode mode() const;
  int grid_side() const;
  int subgrid_factor() const;
  bool operator==(const PixelRecord&) const = default;
};

// Wire layout, little-endian throughout:
//   "DPPX" (4) | version u16 = 1 | mode u8 | reserved u8 = 0 |
//   M u32 | N u32 | b u16 | n u16 |
//   payload | CRC32 u32 of all preceding bytes.
// Uniform payload: G_R*G_C mean bytes. Adaptive payload: G_R*G_C mask means
// as IEEE-754 binary32, simple-grid count u32, simple mean bytes, complex
// submean bytes.
std::vector<std::uint8_t> encode(const PixelRecord& record);

// Inverse of encode. Throws RecordError: not_a_record on bad magic,
// corruption on CRC mismatch, unsupported_version on an unknown version,
// corrupt_record on any length or field inconsistency.
PixelRecord decode(const std::vector<std::uint8_t>& bytes);

// Rebuilds the full pixelized image from stored statistics.
GrayImage reconstruct(const PixelRecord& record);

// File helpers for `.dppx` records. Throw IoError on filesystem failures.
PixelRecord read_record(const std::string& path);
void write_record(const PixelRecord& record, const std::string& path);

}  // namespace dppix

#endif  // DPPIX_RECORD_HPP_
