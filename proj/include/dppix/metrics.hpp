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

#ifndef DPPIX_METRICS_HPP_
#define DPPIX_METRICS_HPP_

#include <cstdint>
#include <string>

#include "dppix/image.hpp"

namespace dppix {

// Mean squared error, accumulated in 64-bit integers and divided once.
// Throws std::invalid_argument on dimension mismatch.
double mse(const GrayImage& a, const GrayImage& b);

// Mean local SSIM over every position of a 7x7 uniform window (stride 1),
// C1 = (0.01 * 255)^2, C2 = (0.03 * 255)^2, population statistics with 1/49
// normalization. Requires min(M, N) >= 7. The result is independent of the
// thread count. Throws std::invalid_argument on dimension mismatch or
// images smaller than the window.
double ssim(const GrayImage& a, const GrayImage& b, int threads = 0);

// One run's results, serialized as one CSV row.
struct MetricReport {
  double epsilon = 0.0;
  int m = 0;
  int b = 0;
  int n = 1;
  std::uint64_t seed = 0;
  double mse = 0.0;
  double ssim = 0.0;
  double runtime_ms = 0.0;
  std::uint64_t record_bytes = 0;
};

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

std::string csv_header();
std::string csv_row(const MetricReport& report);

}  // namespace dppix

#endif  // DPPIX_METRICS_HPP_
