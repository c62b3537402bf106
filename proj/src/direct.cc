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

#include "pgac/direct.h"

#include <sstream>

#include "pgac/errors.h"

namespace pgac {
namespace {

struct DirectTerms {
  Matrix F;       // Xbar1 V
  Matrix sigma;
  Matrix value;
  Matrix weight;  // Ubar'R Ubar (+ lambda Phi)
  double cost = 0.0;
};

// Validates V and solves both Lyapunov equations of the direct formulation.
DirectTerms Evaluate(const DataRecord& record, const CovariancePolicy& policy,
                     const Matrix& Q, const Matrix& R, double lambda) {
  if (lambda < 0.0) {
    throw Error(ErrorCode::kNegativeLambda, "regularization coefficient");
  }
  const Matrix& V = policy.V;
  const Eigen::Index n = record.state_dim();
  const Eigen::Index d = n + record.input_dim();
  if (V.rows() != d || V.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "covariance policy");
  }
  const Matrix xbar0 = record.Xbar0();
  const double defect = (xbar0 * V - Matrix::Identity(n, n)).norm();
  if (!(defect <= 1e-8 * std::max(1.0, xbar0.norm() * V.norm()))) {
    std::ostringstream os;
    os << "||Xbar0 V - I|| = " << defect;
    throw Error(ErrorCode::kConstraintViolated, os.str());
  }
  DirectTerms out;
  out.F = record.Xbar1() * V;
  if (!IsSchurStable(out.F)) {
    std::ostringstream os;
    os << "spectral radius of Xbar1 V is " << SpectralRadius(out.F);
    throw Error(ErrorCode::kNotStabilizingForData, os.str());
  }
  const Matrix ubar = record.Ubar();
  out.weight = ubar.transpose() * R * ubar;
  if (lambda > 0.0) out.weight += lambda * record.Phi();
  const Matrix stage = Symmetrize(Q + V.transpose() * out.weight * V);
  out.sigma = SolveDlyapClosed(out.F, Matrix::Identity(n, n));
  out.value = SolveDlyapCost(out.F, stage);
  out.cost = (stage * out.sigma).trace();
  return out;
}

Matrix GradientFrom(const DataRecord& record, const CovariancePolicy& policy,
                    const DirectTerms& terms) {
  const Matrix& xbar1 = record.Xbar1();
  return 2.0 * (terms.weight + xbar1.transpose() * terms.value * xbar1) *
         policy.V * terms.sigma;
}

}  // namespace

CovariancePolicy Parameterize(const DataRecord& record, const Matrix& K) {
  const Eigen::Index n = record.state_dim();
  if (K.rows() != record.input_dim() || K.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "gain dimensions");
  }
  Matrix stacked(K.rows() + n, n);
  stacked << K, Matrix::Identity(n, n);
  return CovariancePolicy{record.PhiInv() * stacked};
}

Matrix GainOf(const DataRecord& record, const CovariancePolicy& policy) {
  return record.Ubar() * policy.V;
}

CostEvaluation DirectCost(const DataRecord& record,
                          const CovariancePolicy& policy, const Matrix& Q,
                          const Matrix& R) {
  DirectTerms terms = Evaluate(record, policy, Q, R, 0.0);
  return CostEvaluation{terms.cost, std::move(terms.sigma),
                        std::move(terms.value)};
}

Matrix DirectGradient(const DataRecord& record, const CovariancePolicy& policy,
                      const Matrix& Q, const Matrix& R) {
  return GradientFrom(record, policy, Evaluate(record, policy, Q, R, 0.0));
}

double RegularizedDirectCost(const DataRecord& record,
                             const CovariancePolicy& policy, const Matrix& Q,
                             const Matrix& R, double lambda) {
  // The lambda-weighted stage cost already contains lambda Tr(V Sigma V' Phi).
  return Evaluate(record, policy, Q, R, lambda).cost;
}

Matrix RegularizedDirectGradient(const DataRecord& record,
                                 const CovariancePolicy& policy,
                                 const Matrix& Q, const Matrix& R,
                                 double lambda) {
  return GradientFrom(record, policy, Evaluate(record, policy, Q, R, lambda));
}

Matrix DataProjector(const DataRecord& record) {
  return NullspaceProjector(record.Xbar0());
}

ProjectedStepResult ProjectedStep(const DataRecord& record,
                                  const CovariancePolicy& policy,
                                  const Matrix& Q, const Matrix& R, double eta,
                                  double lambda) {
  const Matrix grad = RegularizedDirectGradient(record, policy, Q, R, lambda);
  ProjectedStepResult out;
  out.policy.V = policy.V - eta * DataProjector(record) * grad;
  out.gain = GainOf(record, out.policy);
  return out;
}

Matrix ScalingMatrix(const DataRecord& record) {
  if (!record.HasPhiInv()) {
    throw Error(ErrorCode::kNotPersistentlyExciting,
                "sample covariance is singular");
  }
  const Matrix ubar = record.Ubar();
  return Symmetrize(ubar * DataProjector(record) * ubar.transpose());
}

Matrix NaturalDirectStep(const DataRecord& record, const Matrix& Q,
                         const Matrix& R, const Matrix& K, double eta,
                         double lambda) {
  const ModelEstimate estimate = BatchLeastSquares(record);
  try {
    if (lambda == 0.0) return NaturalStep(estimate, Q, R, K, eta);
    return NaturalStep(estimate,
                       MakeRegularizedWeights(Q, R, record.PhiInv(), lambda),
                       K, eta);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotStabilizingForEstimate) throw;
    throw Error(ErrorCode::kNotStabilizingForData, e.what());
  }
}

}  // namespace pgac
