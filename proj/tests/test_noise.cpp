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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dppix/noise.hpp"
#include "support/oracles.hpp"

using dppix::NoiseKey;
using dppix::NoiseSeed;
using dppix::PrivacyParams;

TEST_SUITE("noise") {

TEST_CASE("sensitivity is 255 m over b squared") {
  CHECK(dppix::sensitivity(16, 16) == 15.9375);
  CHECK(dppix::sensitivity(1, 1) == 255.0);
  CHECK(dppix::sensitivity(32, 32) == 7.96875);
  CHECK_THROWS_AS(dppix::sensitivity(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(dppix::sensitivity(4, 0), std::invalid_argument);
}

TEST_CASE("noise_scale divides sensitivity by the budget") {
  CHECK(dppix::noise_scale(15.9375, 0.5) == 31.875);
  CHECK(dppix::noise_scale(255.0, 0.1) == 2550.0);
  for (const double delta : {0.25, 15.9375, 510.0}) {
    CHECK(dppix::noise_scale(delta, 1.0) == delta);
  }
  CHECK_THROWS_AS(dppix::noise_scale(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dppix::noise_scale(1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(dppix::noise_scale(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("make_privacy_params derives every scale") {
  const PrivacyParams p = dppix::make_privacy_params(0.5, 16, 16, 4);
  CHECK(p.subgrid_side == 4);
  CHECK(p.delta == 15.9375);
  CHECK(p.sigma == 31.875);
  CHECK(p.delta_sub == dppix::sensitivity(4, 16));
  CHECK(p.sigma_sub == p.sigma * 16.0);

  CHECK_THROWS_AS(dppix::make_privacy_params(0.0, 1, 4), std::invalid_argument);
  CHECK_THROWS_AS(dppix::make_privacy_params(1.0, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(dppix::make_privacy_params(1.0, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(dppix::make_privacy_params(1.0, 1, 4, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(dppix::make_privacy_params(1.0, 1, 4, 0),
                  std::invalid_argument);
}

TEST_CASE("subgrid sensitivity follows the n squared law") {
  const PrivacyParams p = dppix::make_privacy_params(1.0, 32, 32, 8);
  CHECK(p.subgrid_side == 4);
  CHECK(dppix::subgrid_sensitivity(p) == 510.0);

  const PrivacyParams collapse = dppix::make_privacy_params(1.0, 16, 16, 1);
  CHECK(dppix::subgrid_sensitivity(collapse) == collapse.delta);
  CHECK(dppix::subgrid_sensitivity(collapse) == 15.9375);

  // The sampler scale keeps the exact ratio by construction; the sensitivity
  // ratio itself is exact for power-of-two factors and within rounding
  // otherwise.
  for (const int n : {1, 2, 3, 4, 6, 8}) {
    const PrivacyParams q = dppix::make_privacy_params(0.7, 5, 24, n);
    const double nn = static_cast<double>(n) * n;
    CHECK(q.sigma_sub == q.sigma * nn);
    CHECK(dppix::subgrid_sensitivity(q) / q.delta ==
          doctest::Approx(nn).epsilon(1e-12));
    if ((n & (n - 1)) == 0) {
      CHECK(q.sigma_sub / q.sigma == nn);
      CHECK(dppix::subgrid_sensitivity(q) / q.delta == nn);
    }
  }
}

TEST_CASE("laplace_at is a pure function of seed, key, and sigma") {
  const NoiseSeed seed{42};
  const NoiseKey key{0, 0, 0, 0};
  const double first = dppix::laplace_at(seed, key, 1.0);
  const double second = dppix::laplace_at(seed, key, 1.0);
  CHECK(first == second);

  CHECK(dppix::laplace_at(seed, NoiseKey{1, 0, 0, 0}, 1.0) != first);
  CHECK(dppix::laplace_at(seed, NoiseKey{0, 1, 0, 0}, 1.0) != first);
  CHECK(dppix::laplace_at(seed, NoiseKey{0, 0, 1, 0}, 1.0) != first);
  CHECK(dppix::laplace_at(seed, NoiseKey{0, 0, 0, 1}, 1.0) != first);
  CHECK(dppix::laplace_at(NoiseSeed{43}, key, 1.0) != first);

  CHECK_THROWS_AS(dppix::laplace_at(seed, key, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dppix::laplace_at(seed, key, -1.0), std::invalid_argument);
}

TEST_CASE("uniform mapping stays inside the open interval") {
  const double lo = dppix::uniform_from_bits(0);
  const double hi = dppix::uniform_from_bits(~std::uint64_t{0});
  CHECK(lo > -0.5);
  CHECK(hi < 0.5);
  CHECK(std::isfinite(dppix::laplace_from_uniform(lo, 1.0)));
  CHECK(std::isfinite(dppix::laplace_from_uniform(hi, 1.0)));
  CHECK(dppix::laplace_from_uniform(0.0, 123.0) == 0.0);
}

TEST_CASE("scale enters the draw as a pure multiplier") {
  const NoiseSeed seed{7};
  for (std::uint32_t k = 0; k < 32; ++k) {
    const NoiseKey key{k, 3 * k, k % 5, k % 3};
    const double unit = dppix::laplace_at(seed, key, 1.0);
    CHECK(dppix::laplace_at(seed, key, 2.0) == 2.0 * unit);
    CHECK(dppix::laplace_at(seed, key, 0.5) == 0.5 * unit);
    CHECK(dppix::laplace_at(seed, key, 1024.0) == 1024.0 * unit);
    CHECK(dppix::laplace_at(seed, key, 3.0) ==
          doctest::Approx(3.0 * unit).epsilon(1e-15));
  }
}

TEST_CASE("keyed draws match the laplace distribution") {
  constexpr int kSide = 1000;
  const NoiseSeed seed{42};
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(kSide) * kSide);
  double abs_sum = 0.0;
  double sum = 0.0;
  for (std::uint32_t r = 0; r < kSide; ++r) {
    for (std::uint32_t c = 0; c < kSide; ++c) {
      const double x = dppix::laplace_at(seed, NoiseKey{r, c, 0, 0}, 1.0);
      samples.push_back(x);
      abs_sum += std::abs(x);
      sum += x;
    }
  }
  const double n = static_cast<double>(samples.size());

  // Critical value for the Kolmogorov-Smirnov test at significance 0.01.
  const double threshold = 1.62762 / std::sqrt(n);
  CHECK(dppix::testing::ks_statistic_laplace(std::move(samples), 1.0) <
        threshold);

  // Mean absolute value estimates sigma; mean stays near zero by symmetry.
  CHECK(abs_sum / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(sum / n) < 5.0 / std::sqrt(n));
}

}  // TEST_SUITE("noise")
