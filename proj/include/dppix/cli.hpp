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

#ifndef DPPIX_CLI_HPP_
#define DPPIX_CLI_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dppix/metrics.hpp"
#include "dppix/noise.hpp"

namespace dppix {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitRecord = 4;
inline constexpr int kExitConsistency = 5;

enum class RunMode {
  uniform,
  adaptive,
  reference,
};

// One resolved invocation. The front end fills this from flags; tests fill
// it directly.
struct RunConfig {
  std::string input;
  std::string out_dir = ".";
  RunMode mode = RunMode::uniform;
  double epsilon = 0.0;
  int m = 1;
  int b = 1;
  int n = 1;
  std::optional<NoiseSeed> seed;
  std::string mask_path;
  bool emit_image = true;
  bool emit_record = true;
  bool reconstruct_check = true;
  int threads = 0;

  // Sweep lists; empty lists are a usage error for the sweep entry point.
  std::vector<double> epsilon_list;
  std::vector<int> m_list;
  std::vector<int> b_list;
  std::vector<int> n_list;
  std::vector<std::uint64_t> seed_list;

  // Bench controls.
  int warmup = 1;
  int repeat = 5;
};

struct RunOutcome {
  MetricReport report;
  std::vector<std::string> written;
};

// Processes one image file: pixelize, write outputs per emit flags, check
// record reversibility, compute metrics. Throws IoError, UsageError,
// RecordError, or ConsistencyError.
RunOutcome run_single(const RunConfig& cfg);

struct FileReport {
  std::string input;
  MetricReport report;
  std::vector<std::string> written;
  std::string error;
  int exit_code = kExitSuccess;
};

// Processes every .pgm under cfg.input if it is a directory, else just
// cfg.input. Files run in parallel; per-file failures are collected, not
// thrown. Results are ordered by input path.
std::vector<FileReport> run_batch(const RunConfig& cfg);

struct SweepResult {
  std::string csv;
  int failures = 0;
};

// Cartesian product of the sweep lists in lexicographic order
// (epsilon, m, b, n, seed), one CSV row per run with a trailing error
// column. Throws UsageError on empty lists.
SweepResult run_sweep(const RunConfig& cfg);

struct BenchResult {
  std::vector<double> reference_ms;
  std::vector<double> parallel_ms;
  double median_reference_ms = 0.0;
  double median_parallel_ms = 0.0;
  double speedup = 0.0;
};

// Times the sequential reference path against the parallel path on one
// image, cfg.repeat samples each after cfg.warmup discarded rounds. Only
// the pixelization call sits inside the timed section.
BenchResult run_bench(const RunConfig& cfg);

std::string bench_text(const BenchResult& result);

// Decodes a record file and rebuilds the image; returns the written path
// (stem + ".rec.pgm" under out_dir).
std::string run_reconstruct(const std::string& record_path,
                            const std::string& out_dir);

// Validates a record file; with a non-empty image path also checks that the
// reconstruction matches that image byte for byte. Returns a summary line.
// Throws RecordError or ConsistencyError on failure.
std::string run_verify(const std::string& record_path,
                       const std::string& image_path);

// Maps an in-flight exception to the process exit code contract.
int exit_code_for(const std::exception& err);

}  // namespace dppix

#endif  // DPPIX_CLI_HPP_
