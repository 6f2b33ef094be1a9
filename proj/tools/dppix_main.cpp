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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "dppix/cli.hpp"
#include "dppix/errors.hpp"
#include "dppix/metrics.hpp"

namespace {

struct SeedFlags {
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool random_seed = false;
  bool no_noise = false;
};

void add_seed_flags(CLI::App* cmd, SeedFlags& flags) {
  CLI::Option* seed =
      cmd->add_option("--seed", flags.seed, "noise stream seed (u64)");
  seed->each([&flags](const std::string&) { flags.seed_given = true; });
  CLI::Option* random = cmd->add_flag(
      "--random-seed", flags.random_seed,
      "draw a seed from the OS and print it to stderr");
  CLI::Option* off = cmd->add_flag(
      "--no-noise", flags.no_noise,
      "disable noise entirely (NOT PRIVATE, for testing only)");
  seed->excludes(random);
  seed->excludes(off);
  random->excludes(off);
}

// Seeds are mandatory for noisy runs so every output is reproducible.
void resolve_seed(const SeedFlags& flags, dppix::RunConfig& cfg) {
  if (flags.no_noise) {
    cfg.seed.reset();
    return;
  }
  if (flags.random_seed) {
    std::random_device device;
    const std::uint64_t value =
        (static_cast<std::uint64_t>(device()) << 32) | device();
    std::cerr << "seed: " << value << '\n';
    cfg.seed = dppix::NoiseSeed{value};
    return;
  }
  if (!flags.seed_given) {
    throw dppix::UsageError(
        "a seed is required: pass --seed N, --random-seed, or --no-noise");
  }
  cfg.seed = dppix::NoiseSeed{flags.seed};
}

void add_common_flags(CLI::App* cmd, dppix::RunConfig& cfg) {
  cmd->add_option("--epsilon", cfg.epsilon, "privacy budget (> 0)");
  cmd->add_option("--m", cfg.m, "neighboring-image pixel distance (>= 1)");
  cmd->add_option("--grid", cfg.b, "grid side length b (>= 1)");
  cmd->add_option("--threads", cfg.threads,
                  "worker threads (0 = DPPX_THREADS or hardware)");
  cmd->add_option("--out", cfg.out_dir, "output directory");
}

void apply_emit(const std::string& emit, dppix::RunConfig& cfg) {
  if (emit == "image") {
    cfg.emit_image = true;
    cfg.emit_record = false;
  } else if (emit == "record") {
    cfg.emit_image = false;
    cfg.emit_record = true;
  } else {
    cfg.emit_image = true;
    cfg.emit_record = true;
  }
}

void print_reports(const std::vector<dppix::FileReport>& reports) {
  std::cout << dppix::csv_header() << '\n';
  for (const dppix::FileReport& file : reports) {
    if (file.error.empty()) {
      std::cout << dppix::csv_row(file.report) << '\n';
    }
  }
}

int first_error_code(const std::vector<dppix::FileReport>& reports) {
  int code = dppix::kExitSuccess;
  for (const dppix::FileReport& file : reports) {
    if (!file.error.empty()) {
      std::cerr << "error: " << file.input << ": " << file.error << '\n';
      if (code == dppix::kExitSuccess) {
        code = file.exit_code != dppix::kExitSuccess ? file.exit_code
                                                     : dppix::kExitIo;
      }
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dppix: differentially private image pixelization (PGM in, PGM + "
      ".dppx records out)"};
  app.require_subcommand(1);

  dppix::RunConfig cfg;
  SeedFlags seed_flags;
  std::string emit = "both";
  std::string record_path;
  std::string image_path;
  std::string csv_path;

  CLI::App* pixelize =
      app.add_subcommand("pixelize", "uniform pixelization of a file or dir");
  pixelize->add_option("input", cfg.input, "input .pgm file or directory")
      ->required();
  add_common_flags(pixelize, cfg);
  add_seed_flags(pixelize, seed_flags);
  pixelize->add_option("--emit", emit, "outputs to write")
      ->check(CLI::IsMember({"image", "record", "both"}));
  pixelize->add_flag("--reference", "use the sequential reference path");
  pixelize->add_flag("!--no-check", cfg.reconstruct_check,
                     "skip the record reconstruction check");

  CLI::App* adaptive =
      app.add_subcommand("adaptive", "region-adaptive pixelization");
  adaptive->add_option("input", cfg.input, "input .pgm file or directory")
      ->required();
  add_common_flags(adaptive, cfg);
  add_seed_flags(adaptive, seed_flags);
  adaptive->add_option("--subgrid-n", cfg.n, "subgrid division factor (n | b)");
  adaptive
      ->add_option("--mask", cfg.mask_path,
                   "mask .pgm file, or directory paired by file stem")
      ->required();
  adaptive->add_option("--emit", emit, "outputs to write")
      ->check(CLI::IsMember({"image", "record", "both"}));
  adaptive->add_flag("!--no-check", cfg.reconstruct_check,
                     "skip the record reconstruction check");

  CLI::App* reconstruct =
      app.add_subcommand("reconstruct", "rebuild the image from a record");
  reconstruct->add_option("record", record_path, "input .dppx record")
      ->required();
  reconstruct->add_option("--out", cfg.out_dir, "output directory");

  CLI::App* sweep =
      app.add_subcommand("sweep", "metric sweep over parameter lists");
  sweep->add_option("input", cfg.input, "input .pgm file")->required();
  add_common_flags(sweep, cfg);
  sweep->add_option("--epsilons", cfg.epsilon_list, "epsilon values");
  sweep->add_option("--ms", cfg.m_list, "m values");
  sweep->add_option("--grids", cfg.b_list, "grid side values");
  sweep->add_option("--subgrid-ns", cfg.n_list, "subgrid factors");
  sweep->add_option("--seeds", cfg.seed_list, "seed values");
  sweep->add_option("--mask", cfg.mask_path, "mask for adaptive sweeps");
  sweep->add_flag("--adaptive", "sweep the adaptive path");
  sweep->add_option("--csv", csv_path, "write the CSV here (default stdout)");

  CLI::App* bench = app.add_subcommand(
      "bench", "time the reference path against the parallel path");
  bench->add_option("input", cfg.input, "input .pgm file")->required();
  add_common_flags(bench, cfg);
  add_seed_flags(bench, seed_flags);
  bench->add_option("--warmup", cfg.warmup, "discarded rounds");
  bench->add_option("--repeat", cfg.repeat, "timed rounds per path");

  CLI::App* verify =
      app.add_subcommand("verify", "validate a record, optionally vs an image");
  verify->add_option("record", record_path, "input .dppx record")->required();
  verify->add_option("--image", image_path,
                     "expected reconstruction, byte-exact");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : dppix::kExitUsage;
  }

  try {
    if (pixelize->parsed()) {
      resolve_seed(seed_flags, cfg);
      apply_emit(emit, cfg);
      cfg.mode = pixelize->count("--reference") > 0 ? dppix::RunMode::reference
                                                    : dppix::RunMode::uniform;
      if (cfg.mode == dppix::RunMode::reference) {
        if (pixelize->count("--emit") > 0 && emit != "image") {
          throw dppix::UsageError("reference mode only supports --emit image");
        }
        cfg.emit_record = false;
      }
      const std::vector<dppix::FileReport> reports = dppix::run_batch(cfg);
      print_reports(reports);
      return first_error_code(reports);
    }
    if (adaptive->parsed()) {
      resolve_seed(seed_flags, cfg);
      apply_emit(emit, cfg);
      cfg.mode = dppix::RunMode::adaptive;
      const std::vector<dppix::FileReport> reports = dppix::run_batch(cfg);
      print_reports(reports);
      return first_error_code(reports);
    }
    if (reconstruct->parsed()) {
      std::cout << dppix::run_reconstruct(record_path, cfg.out_dir) << '\n';
      return dppix::kExitSuccess;
    }
    if (sweep->parsed()) {
      cfg.mode = sweep->count("--adaptive") > 0 ? dppix::RunMode::adaptive
                                                : dppix::RunMode::uniform;
      if (cfg.n_list.empty()) {
        cfg.n_list.push_back(cfg.mode == dppix::RunMode::adaptive ? cfg.n : 1);
      }
      if (cfg.epsilon_list.empty() || cfg.m_list.empty() ||
          cfg.b_list.empty() || cfg.seed_list.empty()) {
        throw dppix::UsageError(
            "sweep requires --epsilons, --ms, --grids, and --seeds");
      }
      const dppix::SweepResult result = dppix::run_sweep(cfg);
      if (csv_path.empty()) {
        std::cout << result.csv;
      } else {
        std::ofstream out(csv_path, std::ios::trunc);
        out << result.csv;
        if (!out) {
          throw dppix::IoError("cannot write " + csv_path);
        }
      }
      if (result.failures > 0) {
        std::cerr << "error: " << result.failures << " sweep run(s) failed\n";
        return 1;
      }
      return dppix::kExitSuccess;
    }
    if (bench->parsed()) {
      resolve_seed(seed_flags, cfg);
      std::cout << dppix::bench_text(dppix::run_bench(cfg));
      return dppix::kExitSuccess;
    }
    if (verify->parsed()) {
      std::cout << dppix::run_verify(record_path, image_path) << '\n';
      return dppix::kExitSuccess;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return dppix::exit_code_for(err);
  }
  return dppix::kExitUsage;
}
