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

#ifndef PGAC_PLANT_H_
#define PGAC_PLANT_H_

#include <optional>
#include <span>

#include "pgac/matops.h"

namespace pgac {

// Ground-truth linear system x+ = A x + B u + w with quadratic weights Q, R.
// Immutable after construction.
class LinearQuadraticPlant {
 public:
  // Throws kDimensionMismatch, kNotPositiveDefinite (Q or R) or
  // kRankDeficient when (A, B) is not controllable.
  LinearQuadraticPlant(Matrix A, Matrix B, Matrix Q, Matrix R);

  // Marginally unstable Laplacian system with B = I, Q = I, R = 1e-3 I.
  static LinearQuadraticPlant Benchmark();

  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  const Matrix& Q() const { return Q_; }
  const Matrix& R() const { return R_; }
  const Matrix& SqrtQ() const { return sqrt_Q_; }
  const Matrix& SqrtR() const { return sqrt_R_; }
  Eigen::Index state_dim() const { return A_.rows(); }
  Eigen::Index input_dim() const { return B_.cols(); }

 private:
  Matrix A_, B_, Q_, R_;
  Matrix sqrt_Q_, sqrt_R_;
};

bool IsControllable(const Matrix& A, const Matrix& B);

struct StepResult {
  Vector next_state;
  Vector performance;  // z = [Q^{1/2} x; R^{1/2} u]
};

StepResult Step(const LinearQuadraticPlant& plant, const Vector& x,
                const Vector& u, const Vector& w);

struct CostEvaluation {
  double cost = 0.0;
  Matrix sigma;  // closed-loop covariance, Sigma = I + F Sigma F'
  Matrix value;  // P = Q + K'RK + F' P F
};

// LQR cost of u = Kx on an arbitrary model (A, B). Throws kNotStabilizing.
CostEvaluation EvaluateLqrCost(const Matrix& A, const Matrix& B,
                               const Matrix& Q, const Matrix& R,
                               const Matrix& K);

// 2((R + B'PB)K + B'PA) Sigma using an evaluation already computed for K.
Matrix LqrGradientFrom(const Matrix& A, const Matrix& B, const Matrix& R,
                       const Matrix& K, const CostEvaluation& eval);

CostEvaluation LqrCost(const LinearQuadraticPlant& plant, const Matrix& K);
Matrix ExactGradient(const LinearQuadraticPlant& plant, const Matrix& K);

// Gain of the finite-horizon Riccati recursion run backwards for `horizon`
// steps from P = Q.
Matrix FiniteHorizonGain(const Matrix& A, const Matrix& B, const Matrix& Q,
                         const Matrix& R, int horizon);

struct OptimalSolution {
  Matrix gain;
  CostEvaluation evaluation;
  RiccatiSolution riccati;
};

// Riccati-optimal gain of (A, B, Q, R). Hewer's iteration is seeded with
// K0 = 0 when A is stable and with a long finite-horizon gain otherwise.
OptimalSolution OptimalGainForModel(const Matrix& A, const Matrix& B,
                                    const Matrix& Q, const Matrix& R,
                                    const RiccatiOptions& options = {});
OptimalSolution OptimalGain(const LinearQuadraticPlant& plant);

struct StabilityCertificate {
  double kappa = 1.0;
  double alpha = 1.0;
  Matrix H;
  Matrix L;
};

// (kappa, alpha)-strong stability witness with H = Sigma^{1/2} and
// L = H^{-1} (A + BK) H. Every inequality of the definition is checked before
// returning; a failed check throws kCertificateViolated.
StabilityCertificate StrongStabilityCertificate(const LinearQuadraticPlant& plant,
                                                const Matrix& K);

struct SequentialStabilityReport {
  int length = 0;
  int contraction_violations = 0;  // (i)  ||L_t|| <= 1 - alpha, ||K_t|| <= kappa
  int transform_violations = 0;    // (ii) ||H_t|| <= kappa, ||H_t^{-1}|| <= 1
  int drift_violations = 0;        // (iii) ||H_{t+1}^{-1} H_t|| <= 1 + alpha/2
  std::optional<int> first_violation;
  double max_drift = 0.0;  // max_t ||H_{t+1}^{-1} H_t||

  bool passed() const {
    return contraction_violations == 0 && transform_violations == 0 &&
           drift_violations == 0;
  }
};

SequentialStabilityReport SequentialStabilityCheck(
    const LinearQuadraticPlant& plant, std::span<const Matrix> gains,
    double kappa, double alpha);

// mu ||grad C(K)||_F^2 - (C(K) - C*) with mu = ||Sigma*|| / sigma_min(R).
// Non-negative whenever gradient dominance holds.
double GradientDominanceGap(const LinearQuadraticPlant& plant, const Matrix& K,
                            const OptimalSolution& optimum);
double GradientDominanceGap(const LinearQuadraticPlant& plant, const Matrix& K);

}  // namespace pgac

#endif  // PGAC_PLANT_H_
