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

#include "dppix/metrics.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "dppix/parallel.hpp"

namespace dppix {

double mse(const GrayImage& a, const GrayImage& b) {
  if (!a.same_dims(b) || a.height < 1 || a.width < 1) {
    throw std::invalid_argument("mse: images must share valid dimensions");
  }
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const std::int64_t d =
        static_cast<std::int64_t>(a.pixels[i]) - b.pixels[i];
    sum += static_cast<std::uint64_t>(d * d);
  }
  return static_cast<double>(sum) / static_cast<double>(a.pixels.size());
}

namespace {

constexpr int kWindow = 7;
constexpr double kWindowArea = 49.0;
constexpr double kC1 = 6.5025;    // (0.01 * 255)^2
constexpr double kC2 = 58.5225;   // (0.03 * 255)^2

// Summed-area table with a zero top row and left column: sat[i][j] holds the
// sum over the i x j top-left rectangle. Exact in 64-bit for 8-bit inputs.
class Sat {
 public:
  Sat(int height, int width)
      : width_(width),
        cells_(static_cast<std::size_t>(height + 1) * (width + 1), 0) {}

  std::uint64_t* row(int i) {
    return cells_.data() + static_cast<std::size_t>(i) * (width_ + 1);
  }
  const std::uint64_t* row(int i) const {
    return cells_.data() + static_cast<std::size_t>(i) * (width_ + 1);
  }

  // Sum over rows [i0, i0 + kWindow) x cols [j0, j0 + kWindow).
  std::uint64_t window(int i0, int j0) const {
    const std::uint64_t* top = row(i0);
    const std::uint64_t* bot = row(i0 + kWindow);
    return bot[j0 + kWindow] - bot[j0] - top[j0 + kWindow] + top[j0];
  }

 private:
  int width_;
  std::vector<std::uint64_t> cells_;
};

}  // namespace

double ssim(const GrayImage& a, const GrayImage& b, int threads) {
  if (!a.same_dims(b)) {
    throw std::invalid_argument("ssim: images must share dimensions");
  }
  const int height = a.height;
  const int width = a.width;
  if (height < kWindow || width < kWindow) {
    throw std::invalid_argument("ssim: images smaller than the 7x7 window");
  }
  const int workers = resolve_thread_count(threads);

  Sat sat_a(height, width);
  Sat sat_b(height, width);
  Sat sat_aa(height, width);
  Sat sat_bb(height, width);
  Sat sat_ab(height, width);

  // Pass 1 fills each table row with horizontal prefix sums (independent
  // rows). Pass 2 adds the row above (independent columns). Integer sums are
  // exact, so the tables do not depend on the schedule.
  parallel_for(height, workers, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const std::uint8_t* pa = a.row(i);
      const std::uint8_t* pb = b.row(i);
      std::uint64_t* ra = sat_a.row(i + 1);
      std::uint64_t* rb = sat_b.row(i + 1);
      std::uint64_t* raa = sat_aa.row(i + 1);
      std::uint64_t* rbb = sat_bb.row(i + 1);
      std::uint64_t* rab = sat_ab.row(i + 1);
      std::uint64_t sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
      for (int j = 0; j < width; ++j) {
        const std::uint64_t va = pa[j];
        const std::uint64_t vb = pb[j];
        sa += va;
        sb += vb;
        saa += va * va;
        sbb += vb * vb;
        sab += va * vb;
        ra[j + 1] = sa;
        rb[j + 1] = sb;
        raa[j + 1] = saa;
        rbb[j + 1] = sbb;
        rab[j + 1] = sab;
      }
    }
  });
  parallel_for(width + 1, workers, [&](int begin, int end) {
    for (int i = 1; i <= height; ++i) {
      std::uint64_t* ra = sat_a.row(i);
      std::uint64_t* rb = sat_b.row(i);
      std::uint64_t* raa = sat_aa.row(i);
      std::uint64_t* rbb = sat_bb.row(i);
      std::uint64_t* rab = sat_ab.row(i);
      const std::uint64_t* ua = sat_a.row(i - 1);
      const std::uint64_t* ub = sat_b.row(i - 1);
      const std::uint64_t* uaa = sat_aa.row(i - 1);
      const std::uint64_t* ubb = sat_bb.row(i - 1);
      const std::uint64_t* uab = sat_ab.row(i - 1);
      for (int j = begin; j < end; ++j) {
        ra[j] += ua[j];
        rb[j] += ub[j];
        raa[j] += uaa[j];
        rbb[j] += ubb[j];
        rab[j] += uab[j];
      }
    }
  });

  // Per-row partials, reduced in row order: the result is a fixed function
  // of the tables regardless of worker count.
  const int pos_rows = height - kWindow + 1;
  const int pos_cols = width - kWindow + 1;
  std::vector<double> row_sums(pos_rows, 0.0);
  parallel_for(pos_rows, workers, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      double acc = 0.0;
      for (int j = 0; j < pos_cols; ++j) {
        const double mu_a =
            static_cast<double>(sat_a.window(i, j)) / kWindowArea;
        const double mu_b =
            static_cast<double>(sat_b.window(i, j)) / kWindowArea;
        const double raw_aa =
            static_cast<double>(sat_aa.window(i, j)) / kWindowArea;
        const double raw_bb =
            static_cast<double>(sat_bb.window(i, j)) / kWindowArea;
        const double raw_ab =
            static_cast<double>(sat_ab.window(i, j)) / kWindowArea;
        // Products are materialized once and reused so that for a == b the
        // numerator and denominator are bitwise equal and the local SSIM is
        // exactly 1.0, independent of fused-multiply-add contraction.
        const double mu_aa = mu_a * mu_a;
        const double mu_bb = mu_b * mu_b;
        const double mu_ab = mu_a * mu_b;
        const double var_a = raw_aa - mu_aa;
        const double var_b = raw_bb - mu_bb;
        const double cov = raw_ab - mu_ab;
        const double num = (2.0 * mu_ab + kC1) * (2.0 * cov + kC2);
        const double den = ((mu_aa + mu_bb) + kC1) * ((var_a + var_b) + kC2);
        acc += num / den;
      }
      row_sums[i] = acc;
    }
  });
  double total = 0.0;
  for (const double partial : row_sums) {
    total += partial;
  }
  return total / (static_cast<double>(pos_rows) * pos_cols);
}

std::string format_double(double value) {
  char buf[40];
  for (const int precision : {15, 16, 17}) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) {
      break;
    }
  }
  return buf;
}

std::string csv_header() {
  return "epsilon,m,b,n,seed,mse,ssim,runtime_ms,record_bytes";
}

std::string csv_row(const MetricReport& report) {
  return format_double(report.epsilon) + ',' + std::to_string(report.m) +
         ',' + std::to_string(report.b) + ',' + std::to_string(report.n) +
         ',' + std::to_string(report.seed) + ',' +
         format_double(report.mse) + ',' + format_double(report.ssim) + ',' +
         format_double(report.runtime_ms) + ',' +
         std::to_string(report.record_bytes);
}

}  // namespace dppix
