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

#include "dppix/record.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "dppix/errors.hpp"

namespace dppix {

namespace {

constexpr std::size_t kHeaderSize = 20;
constexpr std::size_t kMinRecordSize = kHeaderSize + 4;
constexpr std::uint16_t kFormatVersion = 1;
const char kMagic[4] = {'D', 'P', 'P', 'X'};

std::uint32_t crc32_of(const std::uint8_t* data, std::size_t len) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(data),
              static_cast<uInt>(len)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
  static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

// Cursor over an immutable byte buffer; bounds already validated by caller.
struct Reader {
  const std::uint8_t* data;
  std::size_t pos = 0;

  std::uint16_t u16() {
    const std::uint16_t v = static_cast<std::uint16_t>(
        data[pos] | (static_cast<std::uint16_t>(data[pos + 1]) << 8));
    pos += 2;
    return v;
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(data[pos + i]) << (8 * i);
    }
    pos += 4;
    return v;
  }
  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
};

void validate_header_fields(int height, int width, int b, int n,
                            RecordMode mode, const char* who) {
  if (height < 1 || width < 1) {
    throw std::invalid_argument(std::string(who) +
                                ": dimensions must be >= 1");
  }
  if (b < 1 || b > std::max(height, width)) {
    throw std::invalid_argument(std::string(who) + ": invalid grid side");
  }
  if (n < 1 || b % n != 0) {
    throw std::invalid_argument(std::string(who) +
                                ": subgrid factor must divide grid side");
  }
  if (mode == RecordMode::uniform && n != 1) {
    throw std::invalid_argument(std::string(who) +
                                ": uniform records require n == 1");
  }
}

}  // namespace

RecordMode PixelRecord::mode() const {
  return std::holds_alternative<GridMeans>(payload) ? RecordMode::uniform
                                                    : RecordMode::adaptive;
}

int PixelRecord::grid_side() const {
  return std::holds_alternative<GridMeans>(payload)
             ? std::get<GridMeans>(payload).geometry.b
             : std::get<AdaptiveMeans>(payload).geometry.b;
}

int PixelRecord::subgrid_factor() const {
  return std::holds_alternative<GridMeans>(payload)
             ? 1
             : std::get<AdaptiveMeans>(payload).n;
}

std::vector<std::uint8_t> encode(const PixelRecord& record) {
  const int b = record.grid_side();
  const int n = record.subgrid_factor();
  validate_header_fields(record.height, record.width, b, n, record.mode(),
                         "encode");
  const GridGeometry geom = grid_dims(record.height, record.width, b);
  const std::size_t grids =
      static_cast<std::size_t>(geom.grid_rows) * geom.grid_cols;

  std::vector<std::uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u16(out, kFormatVersion);
  out.push_back(static_cast<std::uint8_t>(record.mode()));
  out.push_back(0);
  put_u32(out, static_cast<std::uint32_t>(record.height));
  put_u32(out, static_cast<std::uint32_t>(record.width));
  put_u16(out, static_cast<std::uint16_t>(b));
  put_u16(out, static_cast<std::uint16_t>(n));

  if (const GridMeans* uniform = std::get_if<GridMeans>(&record.payload)) {
    if (uniform->geometry != geom || uniform->values.size() != grids) {
      throw std::invalid_argument("encode: uniform payload length mismatch");
    }
    out.insert(out.end(), uniform->values.begin(), uniform->values.end());
  } else {
    const AdaptiveMeans& adaptive = std::get<AdaptiveMeans>(record.payload);
    const RegionClassification& cls = adaptive.classification;
    const std::size_t simple = static_cast<std::size_t>(cls.simple_count());
    if (adaptive.geometry != geom || cls.geometry != geom ||
        cls.mask_means.size() != grids || cls.is_simple.size() != grids ||
        adaptive.simple_means.size() != simple ||
        adaptive.complex_submeans.size() !=
            (grids - simple) * static_cast<std::size_t>(n) * n) {
      throw std::invalid_argument("encode: adaptive payload length mismatch");
    }
    for (std::size_t g = 0; g < grids; ++g) {
      if ((cls.is_simple[g] != 0) != simple_from_mean(cls.mask_means[g])) {
        throw std::invalid_argument(
            "encode: classification disagrees with mask means");
      }
      put_f32(out, cls.mask_means[g]);
    }
    put_u32(out, static_cast<std::uint32_t>(simple));
    out.insert(out.end(), adaptive.simple_means.begin(),
               adaptive.simple_means.end());
    out.insert(out.end(), adaptive.complex_submeans.begin(),
               adaptive.complex_submeans.end());
  }

  put_u32(out, crc32_of(out.data(), out.size()));
  return out;
}

PixelRecord decode(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw RecordError(RecordErrorKind::not_a_record,
                      "decode: missing DPPX magic");
  }
  if (bytes.size() < kMinRecordSize) {
    throw RecordError(RecordErrorKind::corrupt_record,
                      "decode: truncated header");
  }
  const std::size_t body = bytes.size() - 4;
  Reader trailer{bytes.data(), body};
  if (crc32_of(bytes.data(), body) != trailer.u32()) {
    throw RecordError(RecordErrorKind::corruption, "decode: CRC mismatch");
  }

  Reader in{bytes.data(), 4};
  const std::uint16_t version = in.u16();
  if (version != kFormatVersion) {
    throw RecordError(RecordErrorKind::unsupported_version,
                      "decode: unsupported format version " +
                          std::to_string(version));
  }
  const std::uint8_t mode = bytes[in.pos++];
  const std::uint8_t reserved = bytes[in.pos++];
  const std::uint32_t height = in.u32();
  const std::uint32_t width = in.u32();
  const std::uint16_t b = in.u16();
  const std::uint16_t n = in.u16();
  if ((mode != 1 && mode != 2) || reserved != 0) {
    throw RecordError(RecordErrorKind::corrupt_record,
                      "decode: bad mode or reserved byte");
  }
  if (height < 1 || width < 1 ||
      height > static_cast<std::uint32_t>(std::numeric_limits<int>::max()) ||
      width > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) {
    throw RecordError(RecordErrorKind::corrupt_record,
                      "decode: bad image dimensions");
  }
  PixelRecord record;
  record.height = static_cast<int>(height);
  record.width = static_cast<int>(width);
  try {
    validate_header_fields(record.height, record.width, b, n,
                           static_cast<RecordMode>(mode), "decode");
  } catch (const std::invalid_argument& err) {
    throw RecordError(RecordErrorKind::corrupt_record, err.what());
  }
  const GridGeometry geom = grid_dims(record.height, record.width, b);
  const std::size_t grids =
      static_cast<std::size_t>(geom.grid_rows) * geom.grid_cols;
  const std::size_t payload_len = body - kHeaderSize;

  if (mode == 1) {
    if (payload_len != grids) {
      throw RecordError(RecordErrorKind::corrupt_record,
                        "decode: uniform payload length mismatch");
    }
    GridMeans means;
    means.geometry = geom;
    means.values.assign(bytes.begin() + kHeaderSize,
                        bytes.begin() + kHeaderSize + grids);
    record.payload = std::move(means);
    return record;
  }

  if (payload_len < grids * 4 + 4) {
    throw RecordError(RecordErrorKind::corrupt_record,
                      "decode: adaptive payload too short");
  }
  AdaptiveMeans means;
  means.geometry = geom;
  means.n = n;
  means.classification.geometry = geom;
  means.classification.mask_means.resize(grids);
  means.classification.is_simple.resize(grids);
  std::size_t simple = 0;
  for (std::size_t g = 0; g < grids; ++g) {
    const float mean = in.f32();
    means.classification.mask_means[g] = mean;
    const bool is_simple = simple_from_mean(mean);
    means.classification.is_simple[g] = is_simple ? 1 : 0;
    simple += is_simple ? 1 : 0;
  }
  const std::uint32_t stored_simple = in.u32();
  if (stored_simple != simple) {
    throw RecordError(RecordErrorKind::corrupt_record,
                      "decode: simple count disagrees with mask means");
  }
  const std::size_t submeans =
      (grids - simple) * static_cast<std::size_t>(n) * n;
  if (payload_len != grids * 4 + 4 + simple + submeans) {
    throw RecordError(RecordErrorKind::corrupt_record,
                      "decode: adaptive payload length mismatch");
  }
  means.simple_means.assign(bytes.begin() + in.pos,
                            bytes.begin() + in.pos + simple);
  in.pos += simple;
  means.complex_submeans.assign(bytes.begin() + in.pos,
                                bytes.begin() + in.pos + submeans);
  record.payload = std::move(means);
  return record;
}

GrayImage reconstruct(const PixelRecord& record) {
  if (const GridMeans* uniform = std::get_if<GridMeans>(&record.payload)) {
    return broadcast_means(*uniform, record.height, record.width);
  }
  return reassemble(std::get<AdaptiveMeans>(record.payload), record.height,
                    record.width);
}

PixelRecord read_record(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("read_record: cannot open " + path);
  }
  std::vector<std::uint8_t> bytes(
      (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("read_record: read failed for " + path);
  }
  return decode(bytes);
}

void write_record(const PixelRecord& record, const std::string& path) {
  const std::vector<std::uint8_t> bytes = encode(record);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("write_record: cannot open " + path);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) {
    throw IoError("write_record: write failed for " + path);
  }
}

}  // namespace dppix
