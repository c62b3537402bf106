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

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "pgac/errors.h"
#include "pgac/harness.h"

namespace pgac {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kConfigInvalid, what);
}

double ToDouble(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    Invalid("key '" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

template <typename Int>
Int ToInt(const std::string& key, const std::string& value) {
  Int out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    Invalid("key '" + key + "' expects an integer, got '" + value + "'");
  }
  return out;
}

bool ToBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  Invalid("key '" + key + "' expects true or false");
}

Matrix ToMatrix(const std::string& key, const std::string& value) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(value);
  } catch (const nlohmann::json::exception&) {
    Invalid("key '" + key + "' expects a bracketed matrix");
  }
  if (!j.is_array() || j.empty()) Invalid("key '" + key + "' is not a matrix");
  // A flat list is read as a single row.
  if (!j.front().is_array()) j = nlohmann::json::array({j});
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      Invalid("key '" + key + "' has ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) Invalid("key '" + key + "' has a non-numeric entry");
      M(r, c) = v.get<double>();
    }
  }
  return M;
}

}  // namespace

void ExperimentConfig::Validate() const {
  const Eigen::Index n = plant.state_dim();
  const Eigen::Index m = plant.input_dim();
  if (t0 < n + m) Invalid("t0 must be at least m + n");
  if (T <= 0) Invalid("T must be positive");
  if (!(sigma_w >= 0.0) || !(sigma_u_offline >= 0.0)) {
    Invalid("noise standard deviations must be non-negative");
  }
  if (trials < 1) Invalid("trials must be at least 1");
  if (threads < 0) Invalid("threads must be non-negative");
  if (initial_gain &&
      (initial_gain->rows() != m || initial_gain->cols() != n)) {
    Invalid("initial_gain has the wrong shape");
  }
  try {
    controller.Validate();
  } catch (const Error& e) {
    Invalid(e.what());
  }
}

ExperimentConfig ParseConfig(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      Invalid("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string value(Trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      Invalid("line " + std::to_string(line_no) + ": empty key or value");
    }
    if (!kv.emplace(key, value).second) Invalid("duplicate key '" + key + "'");
  }

  const auto take = [&kv](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  ExperimentConfig cfg;
  if (auto v = take("plant")) {
    cfg.plant_name = *v;
    if (*v == "explicit") {
      auto A = take("A"), B = take("B"), Q = take("Q"), R = take("R");
      if (!A || !B || !Q || !R) Invalid("explicit plant needs A, B, Q and R");
      try {
        cfg.plant = LinearQuadraticPlant(ToMatrix("A", *A), ToMatrix("B", *B),
                                         ToMatrix("Q", *Q), ToMatrix("R", *R));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kConfigInvalid) throw;
        Invalid(std::string("explicit plant: ") + e.what());
      }
    } else if (*v != "benchmark") {
      Invalid("plant must be 'benchmark' or 'explicit'");
    }
  }
  if (auto v = take("t0")) cfg.t0 = ToInt<int>("t0", *v);
  if (auto v = take("T")) cfg.T = ToInt<int>("T", *v);
  if (auto v = take("sigma_w")) cfg.sigma_w = ToDouble("sigma_w", *v);
  if (auto v = take("sigma_u_offline")) {
    cfg.sigma_u_offline = ToDouble("sigma_u_offline", *v);
  }
  if (auto v = take("probe_std")) {
    cfg.controller.probe_std = ToDouble("probe_std", *v);
  }
  if (auto v = take("method")) {
    const auto method = ParseMethod(*v);
    if (!method) Invalid("unknown method '" + *v + "'");
    cfg.controller.method = *method;
  }

  const auto eta = take("eta");
  const auto eta_coeff = take("eta_coeff");
  const std::string eta_rule = take("eta_rule").value_or("constant");
  if (eta_rule == "constant") {
    if (eta_coeff) Invalid("eta_coeff needs eta_rule = inverse_norm_m");
    ConstantStep step;
    if (eta) step.eta = ToDouble("eta", *eta);
    cfg.controller.stepsize = step;
  } else if (eta_rule == "inverse_norm_m") {
    if (eta) Invalid("eta needs eta_rule = constant");
    InverseNormMStep step;
    if (eta_coeff) step.coeff = ToDouble("eta_coeff", *eta_coeff);
    cfg.controller.stepsize = step;
  } else {
    Invalid("eta_rule must be 'constant' or 'inverse_norm_m'");
  }

  const auto lambda0 = take("lambda0");
  const std::string lambda_rule = take("lambda_rule").value_or("zero");
  if (lambda_rule == "zero") {
    if (lambda0) Invalid("lambda0 needs lambda_rule = inverse_sqrt");
    cfg.controller.lambda = NoRegularization{};
  } else if (lambda_rule == "inverse_sqrt") {
    InverseSqrtRegularization rule;
    if (lambda0) rule.lambda0 = ToDouble("lambda0", *lambda0);
    cfg.controller.lambda = rule;
  } else {
    Invalid("lambda_rule must be 'zero' or 'inverse_sqrt'");
  }

  if (auto v = take("seed")) cfg.seed = ToInt<std::uint64_t>("seed", *v);
  if (auto v = take("trials")) cfg.trials = ToInt<int>("trials", *v);
  if (auto v = take("divergence_threshold")) {
    cfg.controller.divergence_threshold = ToDouble("divergence_threshold", *v);
  }
  if (auto v = take("initial_gain")) {
    cfg.initial_gain =
        *v == "optimal" ? OptimalGain(cfg.plant).gain : ToMatrix("initial_gain", *v);
  }
  if (auto v = take("record_timing")) {
    cfg.record_timing = ToBool("record_timing", *v);
  }
  if (auto v = take("threads")) cfg.threads = ToInt<int>("threads", *v);

  if (!kv.empty()) Invalid("unknown key '" + kv.begin()->first + "'");
  cfg.Validate();
  return cfg;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str());
}

}  // namespace pgac
