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

#include "pgac/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include "pgac/errors.h"
#include "pgac/rng.h"

namespace pgac {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double TrueCost(const LinearQuadraticPlant& plant, const Matrix& K) {
  try {
    return LqrCost(plant, K).cost;
  } catch (const Error&) {
    return kInf;
  }
}

}  // namespace

std::string ConfigLabel(const ExperimentConfig& config) {
  std::string label(MethodName(config.controller.method));
  if (std::holds_alternative<InverseSqrtRegularization>(config.controller.lambda)) {
    label += "+reg";
  }
  return label;
}

TrajectoryLog RunTrial(const ExperimentConfig& config, int trial_index) {
  config.Validate();
  return RunTrial(config, trial_index, OptimalGain(config.plant));
}

TrajectoryLog RunTrial(const ExperimentConfig& config, int trial_index,
                       const OptimalSolution& optimum) {
  const LinearQuadraticPlant& plant = config.plant;
  const Eigen::Index n = plant.state_dim();
  const Eigen::Index m = plant.input_dim();
  const auto trial = static_cast<std::uint64_t>(trial_index);
  GaussianStream offline_input(config.seed, trial, StreamId::kOfflineInput);
  GaussianStream process_noise(config.seed, trial, StreamId::kProcessNoise);
  GaussianStream probe(config.seed, trial, StreamId::kProbe);

  TrajectoryLog log;
  log.optimal_cost = optimum.evaluation.cost;
  const double c_star = log.optimal_cost;
  const auto gap_of = [c_star](double cost) { return (cost - c_star) / c_star; };

  Vector x = Vector::Zero(n);
  double stage_cost_sum = 0.0;
  DataRecord record(n, m);
  for (int t = 0; t < config.t0; ++t) {
    const Vector u = config.sigma_u_offline * offline_input.Next(m);
    const Vector w = config.sigma_w * process_noise.Next(n);
    StepResult step = Step(plant, x, u, w);
    stage_cost_sum += step.performance.squaredNorm();
    record.Append(u, x, step.next_state, w);
    x = std::move(step.next_state);
  }

  log.offline_stage_cost = stage_cost_sum;

  ControllerState state = Initialize(plant.Q(), plant.R(), config.controller,
                                     std::move(record), config.initial_gain);
  log.initial_gap = gap_of(TrueCost(plant, state.gain));
  log.final_gap = log.initial_gap;
  log.rows.reserve(static_cast<std::size_t>(config.T));
  log.average_stage_cost.reserve(static_cast<std::size_t>(config.T));

  for (int k = 0; k < config.T; ++k) {
    const Vector u = ControlInput(state, x, probe.Next(m));
    const Vector w = config.sigma_w * process_noise.Next(n);
    StepResult step = Step(plant, x, u, w);
    stage_cost_sum += step.performance.squaredNorm();

    const auto start = std::chrono::steady_clock::now();
    state = Advance(std::move(state), x, u, step.next_state, w);
    const auto stop = std::chrono::steady_clock::now();

    TrajectoryRow row;
    row.t = static_cast<long>(state.time());
    row.cost = TrueCost(plant, state.gain);
    row.gap = gap_of(row.cost);
    row.state_norm = step.next_state.norm();
    const SnrReading snr = ReadSnr(state.record);
    row.gamma = snr.gamma;
    row.delta = snr.delta;
    row.snr = snr.snr;
    row.lambda = state.last_lambda;
    row.eta = state.last_eta;
    row.skipped = state.last_skipped;
    if (config.record_timing) {
      row.step_time_s = std::chrono::duration<double>(stop - start).count();
    }
    log.rows.push_back(row);
    log.average_stage_cost.push_back(stage_cost_sum /
                                     static_cast<double>(row.t));
    log.max_state_norm = std::max(log.max_state_norm, row.state_norm);
    log.final_gap = row.gap;
    x = std::move(step.next_state);
    if (!state.running()) break;
  }
  log.status = state.status;
  log.halt_reason = state.halt_reason;
  return log;
}

std::vector<TrajectoryLog> RunTrials(const ExperimentConfig& config) {
  config.Validate();
  const OptimalSolution optimum = OptimalGain(config.plant);
  std::vector<TrajectoryLog> logs(static_cast<std::size_t>(config.trials));

  const auto run_one = [&](int i) {
    TrajectoryLog& log = logs[static_cast<std::size_t>(i)];
    try {
      log = RunTrial(config, i, optimum);
    } catch (const Error& e) {
      log = TrajectoryLog{};
      log.optimal_cost = optimum.evaluation.cost;
      log.initial_gap = log.final_gap = kInf;
      log.status = ControllerStatus::kHalted;
      log.halt_reason = e.what();
    }
  };

  int workers = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, config.trials);
  if (workers == 1) {
    for (int i = 0; i < config.trials; ++i) run_one(i);
    return logs;
  }
  std::atomic<int> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < config.trials; i = next++) run_one(i);
      });
    }
  }
  return logs;
}

double Median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid]
                                : 0.5 * (values[mid - 1] + values[mid]);
}

MonteCarloSummary Summarize(const ExperimentConfig& config,
                            const std::vector<TrajectoryLog>& logs) {
  MonteCarloSummary s;
  s.method = ConfigLabel(config);
  s.trials = static_cast<int>(logs.size());
  std::vector<double> final_gaps;
  double time_sum = 0.0;
  std::size_t time_count = 0;
  for (const TrajectoryLog& log : logs) {
    if (!log.halted()) final_gaps.push_back(log.final_gap);
    for (const TrajectoryRow& row : log.rows) {
      time_sum += row.step_time_s;
      ++time_count;
    }
  }
  s.P = logs.empty() ? 0.0
                     : static_cast<double>(final_gaps.size()) /
                           static_cast<double>(logs.size());
  s.M = final_gaps.empty() ? std::numeric_limits<double>::quiet_NaN()
                           : Median(final_gaps);
  s.mean_step_time_s =
      time_count == 0 ? 0.0 : time_sum / static_cast<double>(time_count);
  return s;
}

MonteCarloSummary RunMonteCarlo(const ExperimentConfig& config) {
  return Summarize(config, RunTrials(config));
}

double LogLogSlope(const TrajectoryLog& log, long t0, long lo, long hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (const TrajectoryRow& row : log.rows) {
    const long k = row.t - t0;
    if (k < lo || k > hi || !(row.gap > 0.0) || !std::isfinite(row.gap)) {
      continue;
    }
    const double lx = std::log(static_cast<double>(k));
    const double ly = std::log(row.gap);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double c = static_cast<double>(count);
  return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::string TrajectoryCsv(const TrajectoryLog& log) {
  std::string out(kTrajectoryHeader);
  out += '\n';
  for (const TrajectoryRow& r : log.rows) {
    out += std::to_string(r.t);
    for (double v : {r.cost, r.gap, r.state_norm, r.gamma, r.delta, r.snr,
                     r.lambda, r.eta}) {
      out += ',';
      out += FormatDouble(v);
    }
    out += r.skipped ? ",1," : ",0,";
    out += FormatDouble(r.step_time_s);
    out += '\n';
  }
  return out;
}

std::string SummaryCsv(const std::vector<MonteCarloSummary>& summaries) {
  std::string out(kSummaryHeader);
  out += '\n';
  for (const MonteCarloSummary& s : summaries) {
    out += s.method + ',' + std::to_string(s.trials) + ',' + FormatDouble(s.P) +
           ',' + FormatDouble(s.M) + ',' + FormatDouble(s.mean_step_time_s) +
           '\n';
  }
  return out;
}

namespace {

void WriteFile(const std::string& text, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  file << text;
  file.flush();
  if (!file) {
    throw Error(ErrorCode::kIoError, "write failed: " + path.string());
  }
}

double ParseField(std::string_view field) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc() || result.ptr != last) {
    throw Error(ErrorCode::kIoError,
                "malformed csv field '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

void EmitCsv(const TrajectoryLog& log, const std::filesystem::path& path) {
  WriteFile(TrajectoryCsv(log), path);
}

void EmitCsv(const std::vector<MonteCarloSummary>& summaries,
             const std::filesystem::path& path) {
  WriteFile(SummaryCsv(summaries), path);
}

std::vector<TrajectoryRow> ParseTrajectoryCsv(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  if (lines.empty() || lines.front() != kTrajectoryHeader) {
    throw Error(ErrorCode::kIoError, "missing trajectory header");
  }
  std::vector<TrajectoryRow> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string_view> fields;
    std::string_view line = lines[i];
    for (std::size_t pos; (pos = line.find(',')) != std::string_view::npos;) {
      fields.push_back(line.substr(0, pos));
      line.remove_prefix(pos + 1);
    }
    fields.push_back(line);
    if (fields.size() != 11) {
      throw Error(ErrorCode::kIoError,
                  "expected 11 fields on line " + std::to_string(i + 1));
    }
    TrajectoryRow r;
    r.t = static_cast<long>(ParseField(fields[0]));
    r.cost = ParseField(fields[1]);
    r.gap = ParseField(fields[2]);
    r.state_norm = ParseField(fields[3]);
    r.gamma = ParseField(fields[4]);
    r.delta = ParseField(fields[5]);
    r.snr = ParseField(fields[6]);
    r.lambda = ParseField(fields[7]);
    r.eta = ParseField(fields[8]);
    r.skipped = ParseField(fields[9]) != 0.0;
    r.step_time_s = ParseField(fields[10]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace pgac
