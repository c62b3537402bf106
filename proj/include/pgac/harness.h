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

#ifndef PGAC_HARNESS_H_
#define PGAC_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgac/controller.h"
#include "pgac/plant.h"

namespace pgac {

struct ExperimentConfig {
  std::string plant_name = "benchmark";  // "benchmark" or "explicit"
  LinearQuadraticPlant plant = LinearQuadraticPlant::Benchmark();
  int t0 = 20;
  int T = 1000;
  double sigma_w = 1.0;
  double sigma_u_offline = 1.0;
  ControllerSpec controller;
  std::uint64_t seed = 0;
  int trials = 1;
  // Explicit K_{t0}; the certainty-equivalence gain is used when absent.
  std::optional<Matrix> initial_gain;
  // Wall-clock step times are logged only when enabled, since they are the one
  // quantity not determined by the configuration.
  bool record_timing = false;
  int threads = 0;  // 0: hardware concurrency

  void Validate() const;  // throws kConfigInvalid
};

// Flat "key = value" text format, '#' starts a comment. Matrices are
// row-major bracketed lists such as [[1, 0], [0, 1]]. Keys: plant, A, B, Q, R
// (with plant = explicit), t0, T, sigma_w, sigma_u_offline, probe_std, method,
// eta, eta_rule, eta_coeff, lambda_rule, lambda0, seed, trials,
// divergence_threshold, initial_gain ("optimal" or a matrix), record_timing,
// threads. Throws kConfigInvalid.
ExperimentConfig ParseConfig(std::string_view text);
ExperimentConfig LoadConfig(const std::filesystem::path& path);  // kIoError

// Short label such as "direct_vanilla" or "direct_vanilla+reg".
std::string ConfigLabel(const ExperimentConfig& config);

struct TrajectoryRow {
  long t = 0;
  double cost = 0.0;  // C(K_t) on the true plant, +inf if not stabilizing
  double gap = 0.0;   // (C(K_t) - C*) / C*
  double state_norm = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double snr = 0.0;
  double lambda = 0.0;
  double eta = 0.0;
  bool skipped = false;
  double step_time_s = 0.0;
};

struct TrajectoryLog {
  std::vector<TrajectoryRow> rows;  // one per online step, t = t0+1, ...
  // Running average of ||z_i||^2 over i < t, aligned with rows.
  std::vector<double> average_stage_cost;
  double offline_stage_cost = 0.0;  // sum of ||z||^2 over the offline samples
  double optimal_cost = 0.0;
  double initial_gap = 0.0;  // gap of K_{t0}
  double final_gap = 0.0;
  ControllerStatus status = ControllerStatus::kRunning;
  std::string halt_reason;
  double max_state_norm = 0.0;

  bool halted() const { return status == ControllerStatus::kHalted; }
};

struct MonteCarloSummary {
  std::string method;
  int trials = 0;
  double P = 0.0;  // fraction of trials that never halted
  double M = 0.0;  // median final gap over non-halted trials
  double mean_step_time_s = 0.0;
};

// Offline phase with u ~ N(0, sigma_u^2 I) from x_0 = 0, then the adaptive
// loop for T steps. Noise streams derive from (seed, trial_index) only.
// Throws kConfigInvalid, or kInitialGainUnstable / kNotPersistentlyExciting
// from controller initialization.
TrajectoryLog RunTrial(const ExperimentConfig& config, int trial_index);
TrajectoryLog RunTrial(const ExperimentConfig& config, int trial_index,
                       const OptimalSolution& optimum);

// All trials of the config, executed on config.threads workers. The result is
// ordered by trial index and independent of the number of workers. A trial
// whose initialization fails is reported as halted.
std::vector<TrajectoryLog> RunTrials(const ExperimentConfig& config);
MonteCarloSummary Summarize(const ExperimentConfig& config,
                            const std::vector<TrajectoryLog>& logs);
MonteCarloSummary RunMonteCarlo(const ExperimentConfig& config);

// Least-squares slope of log(gap) against log(t - t0) over rows with
// t - t0 in [lo, hi]. NaN when fewer than two usable rows exist.
double LogLogSlope(const TrajectoryLog& log, long t0, long lo, long hi);

double Median(std::vector<double> values);

inline constexpr std::string_view kTrajectoryHeader =
    "t,cost,gap,state_norm,gamma,delta,snr,lambda,eta,skipped,step_time_s";
inline constexpr std::string_view kSummaryHeader =
    "method,trials,P,M,mean_step_time_s";

std::string FormatDouble(double value);
std::string TrajectoryCsv(const TrajectoryLog& log);
std::string SummaryCsv(const std::vector<MonteCarloSummary>& summaries);
// Throws kIoError.
void EmitCsv(const TrajectoryLog& log, const std::filesystem::path& path);
void EmitCsv(const std::vector<MonteCarloSummary>& summaries,
             const std::filesystem::path& path);
// Inverse of TrajectoryCsv. Throws kIoError on malformed input.
std::vector<TrajectoryRow> ParseTrajectoryCsv(std::string_view text);

}  // namespace pgac

#endif  // PGAC_HARNESS_H_
