// Copyright 2026 The PGAC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end for the experiment harness.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pgac/errors.h"
#include "pgac/harness.h"
#include "pgac/selftest.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitSelftest = 4;

struct RunOptions {
  std::string config;
  std::string out;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> method;
  std::optional<int> threads;
  bool timing = false;
};

int ExitCodeFor(const pgac::Error& e) {
  switch (e.code()) {
    case pgac::ErrorCode::kIoError:
      return kExitIo;
    default:
      return kExitConfig;
  }
}

int Run(const RunOptions& opts) {
  pgac::ExperimentConfig cfg = pgac::LoadConfig(opts.config);
  if (opts.trials) cfg.trials = *opts.trials;
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.method) {
    const std::optional<pgac::Method> method = pgac::ParseMethod(*opts.method);
    if (!method) {
      throw pgac::Error(pgac::ErrorCode::kConfigInvalid,
                        "unknown method '" + *opts.method + "'");
    }
    cfg.controller.method = *method;
  }
  if (opts.threads) cfg.threads = *opts.threads;
  if (opts.timing) cfg.record_timing = true;
  cfg.Validate();

  const std::vector<pgac::TrajectoryLog> logs = pgac::RunTrials(cfg);
  const std::vector<pgac::MonteCarloSummary> summary = {
      pgac::Summarize(cfg, logs)};
  if (opts.out.empty()) {
    std::cout << pgac::SummaryCsv(summary);
    return 0;
  }
  const std::filesystem::path dir(opts.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw pgac::Error(pgac::ErrorCode::kIoError,
                      "cannot create " + dir.string() + ": " + ec.message());
  }
  for (std::size_t i = 0; i < logs.size(); ++i) {
    pgac::EmitCsv(logs[i], dir / ("trajectory_" + std::to_string(i) + ".csv"));
  }
  pgac::EmitCsv(summary, dir / "summary.csv");
  std::cout << pgac::SummaryCsv(summary);
  return 0;
}

int Compare(const std::vector<std::string>& paths, const std::string& out,
            bool timing) {
  std::vector<pgac::ExperimentConfig> configs;
  for (const std::string& path : paths) {
    configs.push_back(pgac::LoadConfig(path));
    if (timing) configs.back().record_timing = true;
  }
  std::vector<pgac::MonteCarloSummary> summaries;
  for (const pgac::ExperimentConfig& cfg : configs) {
    summaries.push_back(pgac::RunMonteCarlo(cfg));
  }
  if (!out.empty()) pgac::EmitCsv(summaries, out);
  std::cout << pgac::SummaryCsv(summaries);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Policy gradient adaptive control experiments"};
  app.require_subcommand(1);

  RunOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "Run the trials of one config");
  run->add_option("--config", run_opts.config, "Config file")->required();
  run->add_option("--out", run_opts.out,
                  "Directory for trajectory_<i>.csv and summary.csv");
  run->add_option("--trials", run_opts.trials, "Override trials");
  run->add_option("--seed", run_opts.seed, "Override seed");
  run->add_option("--method", run_opts.method, "Override method");
  run->add_option("--threads", run_opts.threads, "Worker threads, 0 = auto");
  run->add_flag("--timing", run_opts.timing, "Record per-step wall time");

  std::vector<std::string> compare_paths;
  std::string compare_out;
  bool compare_timing = false;
  CLI::App* compare =
      app.add_subcommand("compare", "Summary table over several configs");
  compare->add_option("--configs", compare_paths, "Config files")
      ->required()
      ->expected(1, -1);
  compare->add_option("--out", compare_out, "Summary CSV path");
  compare->add_flag("--timing", compare_timing, "Record per-step wall time");

  app.add_subcommand("selftest", "Run the built-in consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) return Run(run_opts);
    if (compare->parsed()) return Compare(compare_paths, compare_out, compare_timing);
    return pgac::RunSelfTest(std::cout) ? 0 : kExitSelftest;
  } catch (const pgac::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}
