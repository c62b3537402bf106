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

#ifndef PGAC_DIRECT_H_
#define PGAC_DIRECT_H_

#include "pgac/dataflow.h"
#include "pgac/indirect.h"
#include "pgac/matops.h"
#include "pgac/plant.h"

namespace pgac {

// Covariance parameterization of a gain: Phi V = [K; I], hence
// K = Ubar V and Xbar0 V = I.
struct CovariancePolicy {
  Matrix V;  // (m+n) x n
};

// V = Phi^{-1} [K; I]. Throws kNotPersistentlyExciting.
CovariancePolicy Parameterize(const DataRecord& record, const Matrix& K);

// Gain encoded by V, Ubar V.
Matrix GainOf(const DataRecord& record, const CovariancePolicy& policy);

// Direct certainty-equivalence cost
//   J(V) = Tr((Q + V'Ubar'R Ubar V) Sigma),  Sigma = I + Xbar1 V Sigma V'Xbar1'
// with value matrix P = Q + V'Ubar'R Ubar V + V'Xbar1' P Xbar1 V.
// Throws kConstraintViolated when Xbar0 V != I and kNotStabilizingForData
// when Xbar1 V is not Schur stable.
CostEvaluation DirectCost(const DataRecord& record, const CovariancePolicy& policy,
                          const Matrix& Q, const Matrix& R);

// 2 (Ubar'R Ubar + Xbar1' P Xbar1) V Sigma.
Matrix DirectGradient(const DataRecord& record, const CovariancePolicy& policy,
                      const Matrix& Q, const Matrix& R);

// J(V; lambda) = J(V) + lambda Tr(V Sigma V' Phi).
double RegularizedDirectCost(const DataRecord& record,
                             const CovariancePolicy& policy, const Matrix& Q,
                             const Matrix& R, double lambda);

// 2 (lambda Phi + Ubar'R Ubar + Xbar1' P Xbar1) V Sigma, with P from the
// lambda-modified value equation. Throws kNegativeLambda for lambda < 0.
Matrix RegularizedDirectGradient(const DataRecord& record,
                                 const CovariancePolicy& policy,
                                 const Matrix& Q, const Matrix& R,
                                 double lambda);

// Projector onto the nullspace of Xbar0, recomputed from the current data.
Matrix DataProjector(const DataRecord& record);

struct ProjectedStepResult {
  CovariancePolicy policy;
  Matrix gain;
};

// V' = V - eta Pi grad J(V; lambda), K' = Ubar V'. The projection keeps
// Xbar0 V' = I.
ProjectedStepResult ProjectedStep(const DataRecord& record,
                                  const CovariancePolicy& policy,
                                  const Matrix& Q, const Matrix& R, double eta,
                                  double lambda = 0.0);

// M = Ubar Pi Ubar', the data-dependent preconditioner relating the
// projected direct step to the indirect gradient step.
Matrix ScalingMatrix(const DataRecord& record);

// Natural-gradient direct step. Evaluated as the indirect natural step at the
// least-squares estimate Xbar1 Phi^{-1}, to which it is equivalent.
// Throws kNotStabilizingForData.
Matrix NaturalDirectStep(const DataRecord& record, const Matrix& Q,
                         const Matrix& R, const Matrix& K, double eta,
                         double lambda = 0.0);

}  // namespace pgac

#endif  // PGAC_DIRECT_H_
