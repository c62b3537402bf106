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

#ifndef PGAC_CONTROLLER_H_
#define PGAC_CONTROLLER_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "pgac/dataflow.h"
#include "pgac/matops.h"

namespace pgac {

enum class Method {
  kIndirectVanilla,
  kIndirectNatural,
  kIndirectGaussNewton,
  kAdaptiveHewer,
  kDirectVanilla,
  kDirectNatural,
  kOneShotCE,
};

std::string_view MethodName(Method method);
std::optional<Method> ParseMethod(std::string_view name);
bool IsDirect(Method method);

// eta_t = eta.
struct ConstantStep {
  double eta = 0.02;
};
// eta_t = coeff / ||M_t||, direct methods only.
struct InverseNormMStep {
  double coeff = 0.2;
};
using StepsizeRule = std::variant<ConstantStep, InverseNormMStep>;

struct NoRegularization {};
// lambda_t = lambda0 / sqrt(t - t0), and lambda0 at t = t0.
struct InverseSqrtRegularization {
  double lambda0 = 0.1;
};
using LambdaRule = std::variant<NoRegularization, InverseSqrtRegularization>;

struct ControllerSpec {
  Method method = Method::kIndirectVanilla;
  StepsizeRule stepsize = ConstantStep{};
  LambdaRule lambda = NoRegularization{};
  double probe_std = 1.0;
  double divergence_threshold = 1e6;  // on ||x_t||

  // Throws kConfigInvalid, or kRuleMismatch for InverseNormM on an indirect
  // method.
  void Validate() const;
};

enum class ControllerStatus { kRunning, kHalted };

struct ControllerState {
  ControllerSpec spec;
  Matrix Q, R;
  Matrix gain;              // K_t
  ModelEstimate estimate;   // maintained by RLS for indirect methods
  DataRecord record;
  Eigen::Index t0 = 0;      // offline length
  ControllerStatus status = ControllerStatus::kRunning;
  std::string halt_reason;

  // Diagnostics of the most recent Advance.
  double last_eta = 0.0;
  double last_lambda = 0.0;
  bool last_skipped = false;

  Eigen::Index time() const { return record.size(); }
  bool running() const { return status == ControllerStatus::kRunning; }
};

// Runs batch least squares on the offline data and sets K_{t0}: `initial_gain`
// when given, otherwise the certainty-equivalence Riccati gain of the offline
// estimate (the regularized one at lambda_{t0} when a lambda rule is active).
// Throws kNotPersistentlyExciting, or kInitialGainUnstable when the
// certainty-equivalence gain cannot be computed or does not stabilize the
// estimate.
ControllerState Initialize(const Matrix& Q, const Matrix& R,
                           const ControllerSpec& spec, DataRecord offline_record,
                           const std::optional<Matrix>& initial_gain = std::nullopt);

// u = K_t x + probe_std * probe_sample.
Vector ControlInput(const ControllerState& state, const Vector& x,
                    const Vector& probe_sample);

// Ingests (u_t, x_t, x_{t+1}) and performs one policy update with the data
// up to t+1. Engine failures keep the previous gain and set last_skipped;
// ||x_{t+1}|| above the divergence threshold halts the controller. Never
// throws for numerical failures.
ControllerState Advance(ControllerState state, const Vector& x, const Vector& u,
                        const Vector& x_next,
                        const std::optional<Vector>& w = std::nullopt);

// Stepsize for the current record. Throws kRuleMismatch for InverseNormM on
// an indirect method.
double Stepsize(const ControllerState& state);

double LambdaValue(const ControllerSpec& spec, Eigen::Index t, Eigen::Index t0);

}  // namespace pgac

#endif  // PGAC_CONTROLLER_H_
