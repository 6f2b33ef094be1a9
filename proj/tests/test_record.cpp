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

#include <zlib.h>

#include <algorithm>
#include <optional>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "dppix/errors.hpp"
#include "dppix/record.hpp"
#include "support/oracles.hpp"

using dppix::AdaptiveMeans;
using dppix::GrayImage;
using dppix::GridMeans;
using dppix::NoiseSeed;
using dppix::PixelRecord;
using dppix::PrivacyParams;
using dppix::RecordError;
using dppix::RecordErrorKind;
using dppix::RegionMask;

namespace {

dppix::RecordErrorKind kind_of(const std::vector<std::uint8_t>& bytes) {
  try {
    dppix::decode(bytes);
  } catch (const RecordError& err) {
    return err.kind();
  }
  FAIL("decode unexpectedly succeeded");
  return RecordErrorKind::corrupt_record;
}

// Rewrites the CRC trailer after an intentional field edit, so the edit
// reaches the structural checks instead of tripping the corruption check.
void refresh_crc(std::vector<std::uint8_t>& bytes) {
  REQUIRE(bytes.size() >= 4);
  const std::uint32_t crc = static_cast<std::uint32_t>(
      ::crc32(0L, bytes.data(), static_cast<uInt>(bytes.size() - 4)));
  for (int i = 0; i < 4; ++i) {
    bytes[bytes.size() - 4 + i] = static_cast<std::uint8_t>(crc >> (8 * i));
  }
}

PixelRecord uniform_record(std::mt19937_64& rng, int height, int width,
                           int b) {
  const PrivacyParams params = dppix::make_privacy_params(0.5, 16, b);
  const GrayImage img = dppix::testing::random_image(rng, height, width);
  dppix::UniformResult out =
      dppix::pixelize_parallel(img, params, NoiseSeed{rng()});
  return PixelRecord{height, width, std::move(out.means)};
}

PixelRecord adaptive_record(std::mt19937_64& rng, int height, int width,
                            int b, int n) {
  const PrivacyParams params = dppix::make_privacy_params(0.5, 16, b, n);
  const GrayImage img = dppix::testing::random_image(rng, height, width);
  const RegionMask mask = dppix::testing::random_mask(rng, height, width);
  dppix::AdaptiveResult out =
      dppix::pixelize_adaptive(img, mask, params, NoiseSeed{rng()});
  return PixelRecord{height, width, std::move(out.means)};
}

}  // namespace

TEST_SUITE("record") {

TEST_CASE("uniform record sizes follow the fixed layout") {
  GridMeans one;
  one.geometry = dppix::grid_dims(16, 16, 16);
  one.values = {200};
  const PixelRecord tiny{16, 16, one};
  CHECK(dppix::encode(tiny).size() == 25);

  std::mt19937_64 rng(41);
  const PixelRecord pets = uniform_record(rng, 768, 576, 16);
  CHECK(dppix::encode(pets).size() == 1752);

  for (int round = 0; round < 10; ++round) {
    const int height = 1 + static_cast<int>(rng() % 200);
    const int width = 1 + static_cast<int>(rng() % 200);
    const int b = 1 + static_cast<int>(rng() % std::min(height, width));
    const PixelRecord record = uniform_record(rng, height, width, b);
    const dppix::GridGeometry geom = dppix::grid_dims(height, width, b);
    CHECK(dppix::encode(record).size() ==
          24 + static_cast<std::size_t>(geom.grid_count()));
  }
}

TEST_CASE("adaptive record sizes follow the payload law") {
  std::mt19937_64 rng(42);
  GrayImage img = dppix::make_image(4, 4, 50);
  const RegionMask zeros = dppix::make_mask(4, 4, 0);
  const PrivacyParams params = dppix::make_privacy_params(1.0, 1, 4, 2);
  dppix::AdaptiveResult out =
      dppix::pixelize_adaptive(img, zeros, params, std::nullopt);
  const PixelRecord record{4, 4, std::move(out.means)};
  // Header 20, one float32 mask mean, count, 4 submeans, CRC: 36 total.
  CHECK(dppix::encode(record).size() == 36);

  for (int round = 0; round < 10; ++round) {
    const int b = 2 + static_cast<int>(rng() % 7);
    const int n = (b % 2 == 0 && rng() % 2 == 0) ? 2 : 1;
    const int height = b + static_cast<int>(rng() % 70);
    const int width = b + static_cast<int>(rng() % 70);
    const PixelRecord sample = adaptive_record(rng, height, width, b, n);
    const AdaptiveMeans& means = std::get<AdaptiveMeans>(sample.payload);
    const std::size_t grids =
        static_cast<std::size_t>(means.geometry.grid_count());
    const std::size_t simple =
        static_cast<std::size_t>(means.classification.simple_count());
    CHECK(dppix::encode(sample).size() ==
          24 + 4 * grids + 4 + simple + (grids - simple) * n * n);
  }
}

TEST_CASE("record sizes shrink as the grid side doubles") {
  std::mt19937_64 rng(43);
  std::size_t previous = 0;
  for (int b = 1; b <= 128; b *= 2) {
    const std::size_t size = dppix::encode(uniform_record(rng, 768, 576, b))
                                 .size();
    if (previous != 0) {
      CHECK(size < previous);
    }
    previous = size;
  }
}

TEST_CASE("decode inverts encode field for field") {
  std::mt19937_64 rng(44);
  for (int round = 0; round < 20; ++round) {
    const int height = 2 + static_cast<int>(rng() % 60);
    const int width = 2 + static_cast<int>(rng() % 60);
    const int b = 1 + static_cast<int>(rng() % std::min({height, width, 12}));
    if (round % 2 == 0) {
      const PixelRecord record = uniform_record(rng, height, width, b);
      CHECK(dppix::decode(dppix::encode(record)) == record);
    } else {
      const int n = b % 2 == 0 ? 2 : 1;
      const PixelRecord record = adaptive_record(rng, height, width, b, n);
      CHECK(dppix::decode(dppix::encode(record)) == record);
    }
  }
}

TEST_CASE("decode classifies every failure") {
  std::mt19937_64 rng(45);
  const PixelRecord record = uniform_record(rng, 32, 32, 8);
  const std::vector<std::uint8_t> bytes = dppix::encode(record);

  SUBCASE("bad magic is not a record") {
    std::vector<std::uint8_t> bad = bytes;
    bad[0] = 'X';
    CHECK(kind_of(bad) == RecordErrorKind::not_a_record);
    CHECK(kind_of({}) == RecordErrorKind::not_a_record);
  }
  SUBCASE("flipped payload byte is corruption") {
    std::vector<std::uint8_t> bad = bytes;
    bad[22] ^= 0x40;
    CHECK(kind_of(bad) == RecordErrorKind::corruption);
  }
  SUBCASE("flipped trailer byte is corruption") {
    std::vector<std::uint8_t> bad = bytes;
    bad.back() ^= 0x01;
    CHECK(kind_of(bad) == RecordErrorKind::corruption);
  }
  SUBCASE("truncated header is a corrupt record") {
    const std::vector<std::uint8_t> bad(bytes.begin(), bytes.begin() + 10);
    CHECK(kind_of(bad) == RecordErrorKind::corrupt_record);
  }
  SUBCASE("truncated payload is corruption") {
    std::vector<std::uint8_t> bad(bytes.begin(), bytes.end() - 8);
    CHECK(kind_of(bad) == RecordErrorKind::corruption);
  }
}

TEST_CASE("field edits behind a valid trailer are still rejected") {
  std::mt19937_64 rng(46);
  const PixelRecord record = uniform_record(rng, 16, 16, 4);
  const std::vector<std::uint8_t> bytes = dppix::encode(record);

  SUBCASE("future version is unsupported") {
    std::vector<std::uint8_t> bad = bytes;
    bad[4] = 2;
    refresh_crc(bad);
    CHECK(kind_of(bad) == RecordErrorKind::unsupported_version);
  }
  SUBCASE("unknown mode is a corrupt record") {
    std::vector<std::uint8_t> bad = bytes;
    bad[6] = 3;
    refresh_crc(bad);
    CHECK(kind_of(bad) == RecordErrorKind::corrupt_record);
  }
  SUBCASE("nonzero reserved byte is a corrupt record") {
    std::vector<std::uint8_t> bad = bytes;
    bad[7] = 1;
    refresh_crc(bad);
    CHECK(kind_of(bad) == RecordErrorKind::corrupt_record);
  }
  SUBCASE("zero grid side is a corrupt record") {
    std::vector<std::uint8_t> bad = bytes;
    bad[16] = 0;
    bad[17] = 0;
    refresh_crc(bad);
    CHECK(kind_of(bad) == RecordErrorKind::corrupt_record);
  }
  SUBCASE("uniform record with n > 1 is a corrupt record") {
    std::vector<std::uint8_t> bad = bytes;
    bad[18] = 2;
    refresh_crc(bad);
    CHECK(kind_of(bad) == RecordErrorKind::corrupt_record);
  }
  SUBCASE("payload shorter than the header promises is a corrupt record") {
    std::vector<std::uint8_t> bad = bytes;
    bad[8] = 32;  // doubles M, so the grid count no longer fits the payload
    refresh_crc(bad);
    CHECK(kind_of(bad) == RecordErrorKind::corrupt_record);
  }
}

TEST_CASE("adaptive simple count must match the stored mask means") {
  std::mt19937_64 rng(49);
  const GrayImage img = dppix::testing::random_image(rng, 16, 16);
  RegionMask mask = dppix::make_mask(16, 16, 1);
  for (int i = 0; i < 16; ++i) {
    for (int j = 8; j < 16; ++j) {
      mask.values[static_cast<std::size_t>(i) * 16 + j] = 0;
    }
  }
  const PrivacyParams params = dppix::make_privacy_params(0.5, 16, 4, 2);
  dppix::AdaptiveResult out =
      dppix::pixelize_adaptive(img, mask, params, NoiseSeed{rng()});
  PixelRecord record{16, 16, std::move(out.means)};
  AdaptiveMeans& means = std::get<AdaptiveMeans>(record.payload);
  const int simple = means.classification.simple_count();
  const int grids = means.geometry.grid_count();
  REQUIRE(simple == 8);
  REQUIRE(grids == 16);

  std::vector<std::uint8_t> bytes = dppix::encode(record);
  // Stored count lives right after the mask means block.
  const std::size_t count_at = 20 + 4 * static_cast<std::size_t>(grids);
  REQUIRE(bytes[count_at] == static_cast<std::uint8_t>(simple));
  bytes[count_at] = static_cast<std::uint8_t>(simple - 1);
  refresh_crc(bytes);
  CHECK(kind_of(bytes) == RecordErrorKind::corrupt_record);
}

TEST_CASE("reconstruct matches the pipeline image bit for bit") {
  std::mt19937_64 rng(47);
  for (int round = 0; round < 10; ++round) {
    const int height = 6 + static_cast<int>(rng() % 50);
    const int width = 6 + static_cast<int>(rng() % 50);
    const int b =
        1 + static_cast<int>(rng() % static_cast<std::uint64_t>(
                                         std::min({height, width, 10})));
    const GrayImage img = dppix::testing::random_image(rng, height, width);
    const std::optional<NoiseSeed> seed = NoiseSeed{rng()};

    const PrivacyParams uniform_params = dppix::make_privacy_params(0.5, 8, b);
    dppix::UniformResult uniform =
        dppix::pixelize_parallel(img, uniform_params, seed);
    const PixelRecord uni{height, width, uniform.means};
    CHECK(dppix::reconstruct(dppix::decode(dppix::encode(uni))) ==
          uniform.image);

    const int n = b % 2 == 0 ? 2 : 1;
    const PrivacyParams adaptive_params =
        dppix::make_privacy_params(0.5, 8, b, n);
    const RegionMask mask = dppix::testing::random_mask(rng, height, width);
    dppix::AdaptiveResult adaptive =
        dppix::pixelize_adaptive(img, mask, adaptive_params, seed);
    const PixelRecord ada{height, width, adaptive.means};
    CHECK(dppix::reconstruct(dppix::decode(dppix::encode(ada))) ==
          adaptive.image);
  }
}

TEST_CASE("all-zero means reconstruct to a black image") {
  GridMeans zeros;
  zeros.geometry = dppix::grid_dims(12, 20, 4);
  zeros.values.assign(static_cast<std::size_t>(zeros.geometry.grid_count()),
                      0);
  const PixelRecord record{12, 20, zeros};
  CHECK(dppix::reconstruct(record) == dppix::make_image(12, 20, 0));
}

TEST_CASE("record files roundtrip through the filesystem") {
  std::mt19937_64 rng(48);
  const dppix::testing::TempDir tmp;
  const PixelRecord record = uniform_record(rng, 24, 20, 4);
  const std::string path = tmp.file("sample.dppx");
  dppix::write_record(record, path);
  CHECK(dppix::read_record(path) == record);
  CHECK_THROWS_AS(dppix::read_record(tmp.file("missing.dppx")),
                  dppix::IoError);
}

TEST_CASE("encode validates hand-built records") {
  GridMeans wrong;
  wrong.geometry = dppix::grid_dims(8, 8, 4);
  wrong.values = {1, 2, 3};
  CHECK_THROWS_AS(dppix::encode(PixelRecord{8, 8, wrong}),
                  std::invalid_argument);

  AdaptiveMeans mismatched;
  mismatched.geometry = dppix::grid_dims(4, 4, 4);
  mismatched.n = 2;
  mismatched.classification.geometry = mismatched.geometry;
  mismatched.classification.mask_means = {0.9f};
  mismatched.classification.is_simple = {0};
  mismatched.complex_submeans = {1, 2, 3, 4};
  CHECK_THROWS_AS(dppix::encode(PixelRecord{4, 4, mismatched}),
                  std::invalid_argument);
}

}  // TEST_SUITE("record")
