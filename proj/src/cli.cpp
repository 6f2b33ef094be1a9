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

#include "dppix/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dppix/adaptive.hpp"
#include "dppix/errors.hpp"
#include "dppix/parallel.hpp"
#include "dppix/pgm.hpp"
#include "dppix/pixelize.hpp"
#include "dppix/record.hpp"

namespace dppix {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start, Clock::time_point stop) {
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

std::string mask_path_for(const RunConfig& cfg, const fs::path& input) {
  if (cfg.mask_path.empty()) {
    throw UsageError("adaptive mode requires --mask");
  }
  const fs::path mask(cfg.mask_path);
  std::error_code ec;
  if (fs::is_directory(mask, ec)) {
    const fs::path paired = mask / (input.stem().string() + ".pgm");
    if (!fs::exists(paired, ec)) {
      throw IoError("no mask for " + input.string() + " (expected " +
                    paired.string() + ")");
    }
    return paired.string();
  }
  return mask.string();
}

void ensure_out_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + out_dir + ": " +
                  ec.message());
  }
}

double safe_ssim(const GrayImage& a, const GrayImage& b, int threads) {
  if (a.height < 7 || a.width < 7) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return ssim(a, b, threads);
}

// Flag combinations that are wrong for every input, checked before any file
// work so whole batches fail fast as usage errors.
void validate_run_config(const RunConfig& cfg) {
  if (!(cfg.epsilon > 0.0) && cfg.seed.has_value()) {
    throw UsageError("--epsilon must be > 0");
  }
  if (cfg.mode == RunMode::reference && cfg.emit_record) {
    throw UsageError(
        "reference mode keeps no grid statistics and cannot emit records");
  }
  if (cfg.mode == RunMode::adaptive && cfg.mask_path.empty()) {
    throw UsageError("adaptive mode requires --mask");
  }
}

}  // namespace

RunOutcome run_single(const RunConfig& cfg) {
  validate_run_config(cfg);
  const fs::path input(cfg.input);
  const GrayImage img = read_pgm(cfg.input);
  // Noise-disabled runs carry epsilon only as a report label; params still
  // need a positive value to construct.
  const double effective_epsilon = cfg.epsilon > 0.0 ? cfg.epsilon : 1.0;
  const PrivacyParams params = make_privacy_params(
      effective_epsilon, cfg.m, cfg.b,
      cfg.mode == RunMode::adaptive ? cfg.n : 1);

  GrayImage pixelized;
  std::optional<PixelRecord> record;
  Clock::time_point start;
  Clock::time_point stop;
  if (cfg.mode == RunMode::reference) {
    start = Clock::now();
    pixelized = pixelize_reference(img, params, cfg.seed);
    stop = Clock::now();
  } else if (cfg.mode == RunMode::uniform) {
    start = Clock::now();
    UniformResult result = pixelize_parallel(img, params, cfg.seed,
                                             cfg.threads);
    stop = Clock::now();
    pixelized = std::move(result.image);
    record = PixelRecord{img.height, img.width, std::move(result.means)};
  } else {
    const RegionMask mask = read_mask_pgm(mask_path_for(cfg, input));
    if (mask.height != img.height || mask.width != img.width) {
      throw UsageError("mask dimensions do not match image: " + cfg.input);
    }
    start = Clock::now();
    AdaptiveResult result =
        pixelize_adaptive(img, mask, params, cfg.seed, cfg.threads);
    stop = Clock::now();
    pixelized = std::move(result.image);
    record = PixelRecord{img.height, img.width, std::move(result.means)};
  }

  RunOutcome outcome;
  std::uint64_t record_bytes = 0;
  std::vector<std::uint8_t> encoded;
  if (record) {
    encoded = encode(*record);
    record_bytes = encoded.size();
    if (cfg.reconstruct_check) {
      const GrayImage rebuilt = reconstruct(decode(encoded));
      if (!(rebuilt == pixelized)) {
        throw ConsistencyError(
            "reconstruction does not match the emitted image for " +
            cfg.input);
      }
    }
  }

  const std::string stem = input.stem().string();
  if (cfg.emit_image || cfg.emit_record) {
    ensure_out_dir(cfg.out_dir);
  }
  if (cfg.emit_image) {
    const fs::path out = fs::path(cfg.out_dir) / (stem + ".pix.pgm");
    write_pgm(pixelized, out.string());
    outcome.written.push_back(out.string());
  }
  if (record && cfg.emit_record) {
    const fs::path out = fs::path(cfg.out_dir) / (stem + ".dppx");
    write_record(*record, out.string());
    outcome.written.push_back(out.string());
  }

  outcome.report.epsilon = cfg.epsilon;
  outcome.report.m = cfg.m;
  outcome.report.b = cfg.b;
  outcome.report.n = params.n;
  outcome.report.seed = cfg.seed ? cfg.seed->value : 0;
  outcome.report.mse = mse(img, pixelized);
  outcome.report.ssim = safe_ssim(img, pixelized, cfg.threads);
  outcome.report.runtime_ms = elapsed_ms(start, stop);
  outcome.report.record_bytes = record_bytes;
  return outcome;
}

std::vector<FileReport> run_batch(const RunConfig& cfg) {
  validate_run_config(cfg);
  std::error_code ec;
  std::vector<std::string> inputs;
  if (fs::is_directory(cfg.input, ec)) {
    for (const fs::directory_entry& entry :
         fs::directory_iterator(cfg.input)) {
      if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
        inputs.push_back(entry.path().string());
      }
    }
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty()) {
      throw IoError("no .pgm inputs under " + cfg.input);
    }
  } else {
    inputs.push_back(cfg.input);
  }

  std::vector<FileReport> reports(inputs.size());
  const int workers = resolve_thread_count(cfg.threads);
  parallel_for(static_cast<int>(inputs.size()), workers,
               [&](int begin, int end) {
                 for (int i = begin; i < end; ++i) {
                   reports[i].input = inputs[i];
                   RunConfig one = cfg;
                   one.input = inputs[i];
                   try {
                     RunOutcome outcome = run_single(one);
                     reports[i].report = outcome.report;
                     reports[i].written = std::move(outcome.written);
                   } catch (const std::exception& err) {
                     reports[i].error = err.what();
                     reports[i].exit_code = exit_code_for(err);
                   }
                 }
               });
  return reports;
}

namespace {

std::string csv_quote(const std::string& text) {
  std::string quoted = "\"";
  for (const char ch : text) {
    quoted += ch;
    if (ch == '"') {
      quoted += '"';
    }
  }
  quoted += '"';
  return quoted;
}

}  // namespace

SweepResult run_sweep(const RunConfig& cfg) {
  RunConfig base = cfg;
  base.emit_image = false;
  base.emit_record = false;
  if (base.epsilon_list.empty() || base.m_list.empty() ||
      base.b_list.empty() || base.n_list.empty() || base.seed_list.empty()) {
    throw UsageError("sweep lists must be non-empty");
  }
  if (base.mode == RunMode::reference) {
    throw UsageError("sweep supports uniform and adaptive modes only");
  }
  if (base.mode == RunMode::uniform) {
    for (const int n : base.n_list) {
      if (n != 1) {
        throw UsageError("uniform sweeps require n == 1");
      }
    }
  }
  std::sort(base.epsilon_list.begin(), base.epsilon_list.end());
  std::sort(base.m_list.begin(), base.m_list.end());
  std::sort(base.b_list.begin(), base.b_list.end());
  std::sort(base.n_list.begin(), base.n_list.end());
  std::sort(base.seed_list.begin(), base.seed_list.end());

  SweepResult result;
  std::ostringstream csv;
  csv << csv_header() << ",error\n";
  for (const double epsilon : base.epsilon_list) {
    for (const int m : base.m_list) {
      for (const int b : base.b_list) {
        for (const int n : base.n_list) {
          for (const std::uint64_t seed : base.seed_list) {
            RunConfig one = base;
            one.epsilon = epsilon;
            one.m = m;
            one.b = b;
            one.n = n;
            one.seed = NoiseSeed{seed};
            try {
              csv << csv_row(run_single(one).report) << ",\n";
            } catch (const std::exception& err) {
              ++result.failures;
              MetricReport blank;
              blank.epsilon = epsilon;
              blank.m = m;
              blank.b = b;
              blank.n = n;
              blank.seed = seed;
              csv << csv_row(blank) << ',' << csv_quote(err.what()) << '\n';
            }
          }
        }
      }
    }
  }
  result.csv = csv.str();
  return result;
}

namespace {

double median_of(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  if (samples.size() % 2 == 1) {
    return samples[mid];
  }
  return 0.5 * (samples[mid - 1] + samples[mid]);
}

}  // namespace

BenchResult run_bench(const RunConfig& cfg) {
  if (cfg.repeat < 1 || cfg.warmup < 0) {
    throw UsageError("bench requires repeat >= 1 and warmup >= 0");
  }
  const GrayImage img = read_pgm(cfg.input);
  const double effective_epsilon = cfg.epsilon > 0.0 ? cfg.epsilon : 1.0;
  const PrivacyParams params =
      make_privacy_params(effective_epsilon, cfg.m, cfg.b, 1);

  BenchResult result;
  for (int round = -cfg.warmup; round < cfg.repeat; ++round) {
    const Clock::time_point t0 = Clock::now();
    const GrayImage ref = pixelize_reference(img, params, cfg.seed);
    const Clock::time_point t1 = Clock::now();
    UniformResult par = pixelize_parallel(img, params, cfg.seed, cfg.threads);
    const Clock::time_point t2 = Clock::now();
    if (round >= 0) {
      result.reference_ms.push_back(elapsed_ms(t0, t1));
      result.parallel_ms.push_back(elapsed_ms(t1, t2));
    }
    // Schedule independence: both paths must agree whenever grids tile the
    // image exactly; checked here as a free invariant sweep.
    if (img.height % params.b == 0 && img.width % params.b == 0 &&
        !(ref == par.image)) {
      throw ConsistencyError("bench: reference and parallel paths disagree");
    }
  }
  result.median_reference_ms = median_of(result.reference_ms);
  result.median_parallel_ms = median_of(result.parallel_ms);
  result.speedup = result.median_parallel_ms > 0.0
                       ? result.median_reference_ms / result.median_parallel_ms
                       : std::numeric_limits<double>::infinity();
  return result;
}

std::string bench_text(const BenchResult& result) {
  std::ostringstream out;
  out << "reference_ms:";
  for (const double sample : result.reference_ms) {
    out << ' ' << format_double(sample);
  }
  out << "\nparallel_ms:";
  for (const double sample : result.parallel_ms) {
    out << ' ' << format_double(sample);
  }
  out << "\nmedian_reference_ms: " << format_double(result.median_reference_ms)
      << "\nmedian_parallel_ms: " << format_double(result.median_parallel_ms)
      << "\nspeedup: " << format_double(result.speedup) << '\n';
  return out.str();
}

std::string run_reconstruct(const std::string& record_path,
                            const std::string& out_dir) {
  const PixelRecord record = read_record(record_path);
  const GrayImage img = reconstruct(record);
  ensure_out_dir(out_dir);
  const fs::path out =
      fs::path(out_dir) / (fs::path(record_path).stem().string() + ".rec.pgm");
  write_pgm(img, out.string());
  return out.string();
}

std::string run_verify(const std::string& record_path,
                       const std::string& image_path) {
  const PixelRecord record = read_record(record_path);
  const GrayImage rebuilt = reconstruct(record);
  std::ostringstream out;
  out << record_path << ": mode="
      << (record.mode() == RecordMode::uniform ? "uniform" : "adaptive")
      << " dims=" << record.height << 'x' << record.width
      << " b=" << record.grid_side() << " n=" << record.subgrid_factor();
  if (!image_path.empty()) {
    const GrayImage img = read_pgm(image_path);
    if (!(rebuilt == img)) {
      throw ConsistencyError("verify: reconstruction differs from " +
                             image_path);
    }
    out << " matches=" << image_path;
  }
  out << " ok";
  return out.str();
}

int exit_code_for(const std::exception& err) {
  if (dynamic_cast<const ConsistencyError*>(&err) != nullptr) {
    return kExitConsistency;
  }
  if (dynamic_cast<const RecordError*>(&err) != nullptr) {
    return kExitRecord;
  }
  if (dynamic_cast<const IoError*>(&err) != nullptr) {
    return kExitIo;
  }
  if (dynamic_cast<const UsageError*>(&err) != nullptr ||
      dynamic_cast<const std::invalid_argument*>(&err) != nullptr) {
    return kExitUsage;
  }
  return 1;
}

}  // namespace dppix
