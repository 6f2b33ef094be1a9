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

#ifndef DPPIX_NOISE_HPP_
#define DPPIX_NOISE_HPP_

#include <cstdint>

namespace dppix {

// Seed for the keyed noise stream. Two runs with equal seeds draw identical
// noise for identical keys, independent of evaluation order.
struct NoiseSeed {
  std::uint64_t value = 0;
};

// Position key of one noise draw. Grid cell (r, c); subgrid cell (sr, sc)
// within it, both zero for whole-grid draws. Distinct keys give independent
// draws under a fixed seed.
struct NoiseKey {
  std::uint32_t r = 0;
  std::uint32_t c = 0;
  std::uint32_t sr = 0;
  std::uint32_t sc = 0;
};

// Calibration for one run. sigma = delta / epsilon with delta = 255 m / b^2.
// sigma_sub = sigma * n^2 so the subgrid scale stays in exact ratio to the
// grid scale; for n = 1 the two collapse bitwise.
struct PrivacyParams {
  double epsilon = 0.0;
  int m = 0;
  int b = 0;
  int n = 1;
  int subgrid_side = 0;
  double delta = 0.0;
  double sigma = 0.0;
  double delta_sub = 0.0;
  double sigma_sub = 0.0;
};

// Validates and derives all scales. Requires epsilon > 0, m >= 1, b >= 1,
// n >= 1, and b divisible by n. Throws std::invalid_argument otherwise.
PrivacyParams make_privacy_params(double epsilon, int m, int b, int n = 1);

// L1 sensitivity of one grid mean under m changed pixels: 255 m / b^2.
double sensitivity(int b, int m);

// Laplace scale delta / epsilon. Throws std::invalid_argument if
// epsilon <= 0 or delta <= 0.
double noise_scale(double delta, double epsilon);

// L1 sensitivity of one subgrid mean: 255 m / s_b^2 with s_b = b / n.
double subgrid_sensitivity(const PrivacyParams& params);

// 64 keyed pseudorandom bits from (seed, key) via a splitmix64 finalizer
// chain. Pure function of its inputs.
std::uint64_t keyed_bits(NoiseSeed seed, const NoiseKey& key);

// Maps 64 bits to u in (-0.5, 0.5). The top 53 bits give a dyadic rational
// in [0, 1); endpoints are clamped away so log stays finite.
double uniform_from_bits(std::uint64_t bits);

// Inverse CDF of the zero-mean Laplace distribution with scale sigma,
// parameterized by u in (-0.5, 0.5).
double laplace_from_uniform(double u, double sigma);

// One keyed Laplace draw. Throws std::invalid_argument if sigma <= 0.
double laplace_at(NoiseSeed seed, const NoiseKey& key, double sigma);

}  // namespace dppix

#endif  // DPPIX_NOISE_HPP_
