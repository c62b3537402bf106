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

#ifndef PGAC_INDIRECT_H_
#define PGAC_INDIRECT_H_

#include "pgac/dataflow.h"
#include "pgac/matops.h"
#include "pgac/plant.h"

namespace pgac {

enum class GradientKind { kVanilla, kNatural, kGaussNewton };

// Weights of the variance-regularized certainty-equivalence cost
//   C(K; lambda) = Tr((blkdiag(R, Q) + lambda Phi^{-1}) Xi),
//   Xi = [K; I] Sigma [K; I]'.
// With Phi^{-1} partitioned into uu/ux/xu/xx blocks:
struct RegularizedWeights {
  Matrix Q_lambda;  // Q + lambda (Phi^{-1})_xx
  Matrix R_lambda;  // R + lambda (Phi^{-1})_uu
  Matrix cross;     // lambda (Phi^{-1})_ux, m x n
  double lambda = 0.0;
};

// Throws kNegativeLambda for lambda < 0.
RegularizedWeights MakeRegularizedWeights(const Matrix& Q, const Matrix& R,
                                          const Matrix& phi_inv, double lambda);
// The lambda = 0 weights (Q, R, 0).
RegularizedWeights PlainWeights(const Matrix& Q, const Matrix& R);

// Certainty-equivalence LQR cost on the estimate. Throws
// kNotStabilizingForEstimate when Ahat + Bhat K is not Schur stable.
CostEvaluation CeCost(const ModelEstimate& estimate, const Matrix& Q,
                      const Matrix& R, const Matrix& K);

// Policy gradient of CeCost (two Lyapunov solves).
Matrix CeGradient(const ModelEstimate& estimate, const Matrix& Q,
                  const Matrix& R, const Matrix& K);

// Natural gradient step K - eta grad C(K) Sigma^{-1}
//   = K - 2 eta (R_l K + Bhat' P (Ahat + Bhat K) + cross),
// needing only the value matrix P (one Lyapunov solve).
Matrix NaturalStep(const ModelEstimate& estimate, const Matrix& Q,
                   const Matrix& R, const Matrix& K, double eta);
Matrix NaturalStep(const ModelEstimate& estimate,
                   const RegularizedWeights& weights, const Matrix& K,
                   double eta);

// Gauss-Newton step, the natural step preconditioned by
// (R_l + Bhat' P Bhat)^{-1}. At eta = 1/2 this is one policy improvement of
// Hewer's iteration on the estimate.
Matrix GaussNewtonStep(const ModelEstimate& estimate, const Matrix& Q,
                       const Matrix& R, const Matrix& K, double eta);
Matrix GaussNewtonStep(const ModelEstimate& estimate,
                       const RegularizedWeights& weights, const Matrix& K,
                       double eta);

// Xi = [K; I] Sigma [K; I]'.
Matrix StackedPolicyCovariance(const Matrix& K, const Matrix& sigma);

// Value of the regularized cost C(K; lambda) on the estimate.
double RegularizedCeCost(const ModelEstimate& estimate, const Matrix& Q,
                         const Matrix& R, const Matrix& K,
                         const Matrix& phi_inv, double lambda);

// Gradient of C(K; lambda):
//   2 (R_l K + Bhat' P (Ahat + Bhat K) + cross) Sigma
// with P solving the lambda-modified value equation.
Matrix RegularizedGradient(const ModelEstimate& estimate, const Matrix& Q,
                           const Matrix& R, const Matrix& K,
                           const Matrix& phi_inv, double lambda);
Matrix RegularizedGradient(const ModelEstimate& estimate,
                           const RegularizedWeights& weights, const Matrix& K);

// Minimizer of C(K; lambda) on the estimate. The cross weight is removed by
// the substitution u = v - R_l^{-1} cross x before the Riccati solve.
// Throws kInitialGainUnstable when no stabilizing gain is found.
Matrix RegularizedCeGain(const ModelEstimate& estimate,
                         const RegularizedWeights& weights);

}  // namespace pgac

#endif  // PGAC_INDIRECT_H_
