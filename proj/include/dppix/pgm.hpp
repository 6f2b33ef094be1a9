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

#ifndef DPPIX_PGM_HPP_
#define DPPIX_PGM_HPP_

#include <string>

#include "dppix/image.hpp"

namespace dppix {

// Binary PGM (P5, maxval 255) reader. Accepts '#' comment lines in the
// header. Throws IoError on missing files, malformed headers, maxval != 255,
// or truncated pixel data.
GrayImage read_pgm(const std::string& path);

// Writes binary PGM (P5, maxval 255). Throws IoError on failure.
void write_pgm(const GrayImage& img, const std::string& path);

// Reads a PGM as a region mask: samples >= 128 become 1, all others 0.
RegionMask read_mask_pgm(const std::string& path);

}  // namespace dppix

#endif  // DPPIX_PGM_HPP_
