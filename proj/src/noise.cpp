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

#include "dppix/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace dppix {

double sensitivity(int b, int m) {
  if (b < 1 || m < 1) {
    throw std::invalid_argument("sensitivity: b and m must be >= 1");
  }
  return 255.0 * m / (static_cast<double>(b) * b);
}

double noise_scale(double delta, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("noise_scale: epsilon must be > 0");
  }
  if (!(delta > 0.0)) {
    throw std::invalid_argument("noise_scale: delta must be > 0");
  }
  return delta / epsilon;
}

PrivacyParams make_privacy_params(double epsilon, int m, int b, int n) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("make_privacy_params: epsilon must be > 0");
  }
  if (m < 1) {
    throw std::invalid_argument("make_privacy_params: m must be >= 1");
  }
  if (b < 1) {
    throw std::invalid_argument("make_privacy_params: b must be >= 1");
  }
  if (n < 1) {
    throw std::invalid_argument("make_privacy_params: n must be >= 1");
  }
  if (b % n != 0) {
    throw std::invalid_argument("make_privacy_params: n must divide b");
  }
  PrivacyParams params;
  params.epsilon = epsilon;
  params.m = m;
  params.b = b;
  params.n = n;
  params.subgrid_side = b / n;
  params.delta = sensitivity(b, m);
  params.sigma = noise_scale(params.delta, epsilon);
  params.delta_sub = sensitivity(params.subgrid_side, m);
  // sigma * n^2 rather than delta_sub / epsilon: keeps sigma_sub / sigma
  // equal to n^2 bitwise, and collapses to sigma for n = 1.
  params.sigma_sub = params.sigma * (static_cast<double>(n) * n);
  return params;
}

double subgrid_sensitivity(const PrivacyParams& params) {
  return sensitivity(params.subgrid_side, params.m);
}

namespace {

// splitmix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t keyed_bits(NoiseSeed seed, const NoiseKey& key) {
  std::uint64_t state = mix64(seed.value);
  state = mix64(state ^ ((static_cast<std::uint64_t>(key.r) << 32) | key.c));
  state = mix64(state ^ ((static_cast<std::uint64_t>(key.sr) << 32) | key.sc));
  return state;
}

double uniform_from_bits(std::uint64_t bits) {
  // Top 53 bits as a dyadic rational in [0, 1), shifted to [-0.5, 0.5).
  constexpr double kTwoNeg53 = 0x1.0p-53;
  constexpr double kHalfOpen = 0.5 - kTwoNeg53;
  const double u = static_cast<double>(bits >> 11) * kTwoNeg53 - 0.5;
  if (u <= -kHalfOpen) {
    return -kHalfOpen;
  }
  if (u >= kHalfOpen) {
    return kHalfOpen;
  }
  return u;
}

double laplace_from_uniform(double u, double sigma) {
  const double sign = u < 0.0 ? -1.0 : 1.0;
  return sign * sigma * -std::log1p(-2.0 * std::abs(u));
}

double laplace_at(NoiseSeed seed, const NoiseKey& key, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("laplace_at: sigma must be > 0");
  }
  return laplace_from_uniform(uniform_from_bits(keyed_bits(seed, key)), sigma);
}

}  // namespace dppix
