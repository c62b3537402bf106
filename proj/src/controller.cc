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

#include "pgac/controller.h"

#include <array>
#include <cmath>
#include <utility>

#include "pgac/direct.h"
#include "pgac/errors.h"
#include "pgac/indirect.h"
#include "pgac/plant.h"

namespace pgac {
namespace {

constexpr std::array<std::pair<Method, std::string_view>, 7> kMethodNames = {{
    {Method::kIndirectVanilla, "indirect_vanilla"},
    {Method::kIndirectNatural, "indirect_natural"},
    {Method::kIndirectGaussNewton, "indirect_gauss_newton"},
    {Method::kAdaptiveHewer, "adaptive_hewer"},
    {Method::kDirectVanilla, "direct_vanilla"},
    {Method::kDirectNatural, "direct_natural"},
    {Method::kOneShotCE, "one_shot_ce"},
}};

bool UsesRls(Method method) { return !IsDirect(method); }

Matrix UpdatedGain(const ControllerState& state, double eta, double lambda) {
  const Matrix& K = state.gain;
  const auto weights = [&] {
    return lambda > 0.0 ? MakeRegularizedWeights(state.Q, state.R,
                                                 state.record.PhiInv(), lambda)
                        : PlainWeights(state.Q, state.R);
  };
  switch (state.spec.method) {
    case Method::kIndirectVanilla: {
      const Matrix grad =
          lambda > 0.0 ? RegularizedGradient(state.estimate, weights(), K)
                       : CeGradient(state.estimate, state.Q, state.R, K);
      return K - eta * grad;
    }
    case Method::kIndirectNatural:
      return NaturalStep(state.estimate, weights(), K, eta);
    case Method::kIndirectGaussNewton:
    case Method::kAdaptiveHewer:
      return GaussNewtonStep(state.estimate, weights(), K, eta);
    case Method::kDirectVanilla:
      return ProjectedStep(state.record, Parameterize(state.record, K), state.Q,
                           state.R, eta, lambda)
          .gain;
    case Method::kDirectNatural:
      return NaturalDirectStep(state.record, state.Q, state.R, K, eta, lambda);
    case Method::kOneShotCE:
      return OptimalGainForModel(state.estimate.Ahat, state.estimate.Bhat,
                                 state.Q, state.R)
          .gain;
  }
  return K;
}

}  // namespace

std::string_view MethodName(Method method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return name;
  }
  return "unknown";
}

std::optional<Method> ParseMethod(std::string_view name) {
  for (const auto& [m, n] : kMethodNames) {
    if (n == name) return m;
  }
  return std::nullopt;
}

bool IsDirect(Method method) {
  return method == Method::kDirectVanilla || method == Method::kDirectNatural;
}

void ControllerSpec::Validate() const {
  if (const auto* c = std::get_if<ConstantStep>(&stepsize)) {
    if (!(c->eta > 0.0)) {
      throw Error(ErrorCode::kConfigInvalid, "stepsize eta must be positive");
    }
  } else {
    const auto& r = std::get<InverseNormMStep>(stepsize);
    if (!(r.coeff > 0.0)) {
      throw Error(ErrorCode::kConfigInvalid, "stepsize coefficient must be positive");
    }
    if (!IsDirect(method)) {
      throw Error(ErrorCode::kRuleMismatch,
                  "inverse_norm_m stepsize needs a direct method");
    }
  }
  if (const auto* l = std::get_if<InverseSqrtRegularization>(&lambda)) {
    if (!(l->lambda0 >= 0.0)) {
      throw Error(ErrorCode::kConfigInvalid, "lambda0 must be non-negative");
    }
  }
  if (!(probe_std >= 0.0)) {
    throw Error(ErrorCode::kConfigInvalid, "probe_std must be non-negative");
  }
  if (!(divergence_threshold > 0.0)) {
    throw Error(ErrorCode::kConfigInvalid, "divergence threshold must be positive");
  }
}

ControllerState Initialize(const Matrix& Q, const Matrix& R,
                           const ControllerSpec& spec, DataRecord offline_record,
                           const std::optional<Matrix>& initial_gain) {
  spec.Validate();
  ControllerState state{.spec = spec,
                        .Q = Q,
                        .R = R,
                        .gain = {},
                        .estimate = BatchLeastSquares(offline_record),
                        .record = std::move(offline_record),
                        .t0 = 0,
                        .status = ControllerStatus::kRunning,
                        .halt_reason = {}};
  state.t0 = state.record.size();
  if (!state.record.HasPhiInv()) {
    throw Error(ErrorCode::kNotPersistentlyExciting, "offline data");
  }
  if (initial_gain) {
    state.gain = *initial_gain;
    return state;
  }
  // A regularized controller starts from the minimizer of its own cost at
  // lambda_{t0}, which reduces to the plain Riccati gain when lambda = 0.
  const double lambda0 = LambdaValue(spec, state.t0, state.t0);
  try {
    if (lambda0 > 0.0) {
      state.gain = RegularizedCeGain(
          state.estimate,
          MakeRegularizedWeights(Q, R, state.record.PhiInv(), lambda0));
    } else {
      state.gain = OptimalGainForModel(state.estimate.Ahat,
                                       state.estimate.Bhat, Q, R)
                       .gain;
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::kInitialGainUnstable, e.what());
  }
  if (!IsSchurStable(state.estimate.Ahat + state.estimate.Bhat * state.gain)) {
    throw Error(ErrorCode::kInitialGainUnstable,
                "certainty-equivalence gain does not stabilize the estimate");
  }
  return state;
}

Vector ControlInput(const ControllerState& state, const Vector& x,
                    const Vector& probe_sample) {
  return state.gain * x + state.spec.probe_std * probe_sample;
}

double Stepsize(const ControllerState& state) {
  if (const auto* c = std::get_if<ConstantStep>(&state.spec.stepsize)) {
    return c->eta;
  }
  if (!IsDirect(state.spec.method)) {
    throw Error(ErrorCode::kRuleMismatch,
                "inverse_norm_m stepsize needs a direct method");
  }
  const double coeff = std::get<InverseNormMStep>(state.spec.stepsize).coeff;
  return coeff / SpectralNorm(ScalingMatrix(state.record));
}

double LambdaValue(const ControllerSpec& spec, Eigen::Index t, Eigen::Index t0) {
  const auto* rule = std::get_if<InverseSqrtRegularization>(&spec.lambda);
  if (rule == nullptr) return 0.0;
  if (t <= t0) return rule->lambda0;
  return rule->lambda0 / std::sqrt(static_cast<double>(t - t0));
}

ControllerState Advance(ControllerState state, const Vector& x, const Vector& u,
                        const Vector& x_next, const std::optional<Vector>& w) {
  if (!state.running()) return state;
  state.last_skipped = false;

  try {
    if (UsesRls(state.spec.method)) {
      state.estimate = RlsUpdate(state.estimate, state.record, u, x, x_next);
    }
  } catch (const Error&) {
    state.last_skipped = true;
  }
  state.record.Append(u, x, x_next, w);

  if (!x_next.allFinite() ||
      x_next.norm() > state.spec.divergence_threshold) {
    state.status = ControllerStatus::kHalted;
    state.halt_reason = "Diverged";
    return state;
  }
  if (state.last_skipped) return state;

  try {
    state.last_lambda = LambdaValue(state.spec, state.time(), state.t0);
    state.last_eta = state.spec.method == Method::kAdaptiveHewer
                         ? 0.5
                         : (state.spec.method == Method::kOneShotCE
                                ? 0.0
                                : Stepsize(state));
    Matrix next = UpdatedGain(state, state.last_eta, state.last_lambda);
    if (next.allFinite()) {
      state.gain = std::move(next);
    } else {
      state.last_skipped = true;
    }
  } catch (const Error&) {
    state.last_skipped = true;
  }
  return state;
}

}  // namespace pgac
