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

#pragma once

#include <stdexcept>
#include <string>

namespace dppix {

// File could not be opened, read, written, or parsed as its format.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Command-line / configuration problem (bad flags, missing inputs).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A pipeline self-check failed (e.g. reconstruct != emitted image).
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RecordErrorKind {
  not_a_record,         // missing or wrong magic
  unsupported_version,  // format version this build cannot read
  corruption,           // CRC mismatch
  corrupt_record        // internally inconsistent layout or lengths
};

class RecordError : public std::runtime_error {
 public:
  RecordError(RecordErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  RecordErrorKind kind() const { return kind_; }

 private:
  RecordErrorKind kind_;
};

}  // namespace dppix
