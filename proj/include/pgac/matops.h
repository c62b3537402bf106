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

#ifndef PGAC_MATOPS_H_
#define PGAC_MATOPS_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace pgac {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A closed loop counts as stabilizing only when its spectral radius is below
// 1 - kStabilityMargin.
inline constexpr double kStabilityMargin = 1e-9;

double SpectralRadius(const Matrix& F);
bool IsSchurStable(const Matrix& F, double margin = kStabilityMargin);

double SpectralNorm(const Matrix& M);
double MinSingularValue(const Matrix& M);
Matrix Symmetrize(const Matrix& M);
bool IsSymmetric(const Matrix& M, double rel_tol = 1e-10);

// Solves X = W + F X F' (closed-loop state covariance form).
//
// The equation is vectorized as (I - F (x) F) vec(X) = vec(W) and solved
// densely, which is exact and cheap for the small dimensions used here. The
// result is symmetrized. Throws kNotStable when F is not Schur stable and
// kNonSymmetric when W is not symmetric.
Matrix SolveDlyapClosed(const Matrix& F, const Matrix& W);

// Solves X = W + F' X F (value / cost-to-go form).
Matrix SolveDlyapCost(const Matrix& F, const Matrix& W);

// Number of Lyapunov solves performed by the calling thread so far. Used to
// check the per-step work of the adaptive controllers.
std::uint64_t LyapunovSolveCount();

struct RiccatiOptions {
  double tol = 1e-10;  // on ||K_{i+1} - K_i||_F
  int max_iter = 500;
};

struct RiccatiSolution {
  Matrix value_matrix;  // P
  Matrix gain;          // K = -(R + B'PB)^{-1} B'PA
  int iterations = 0;
  double residual = 0.0;  // Frobenius norm of the Riccati equation defect
  // Policy iterates K_0, K_1, ..., K_final and the cost trace(P_i) of each.
  std::vector<Matrix> gains;
  std::vector<double> costs;
};

// Hewer's policy iteration. Alternates policy evaluation
//   P_{i+1} = Q + K_i' R K_i + (A + B K_i)' P_{i+1} (A + B K_i)
// with policy improvement
//   K_{i+1} = -(R + B' P_{i+1} B)^{-1} B' P_{i+1} A
// from the stabilizing gain K0 until successive gains agree to options.tol.
RiccatiSolution SolveRiccatiHewer(const Matrix& A, const Matrix& B,
                                  const Matrix& Q, const Matrix& R,
                                  const Matrix& K0,
                                  const RiccatiOptions& options = {});

// Riccati equation defect ||A'PA - P + Q - A'PB (R + B'PB)^{-1} B'PA||_F.
double RiccatiResidual(const Matrix& A, const Matrix& B, const Matrix& Q,
                       const Matrix& R, const Matrix& P);

// A' (A A')^{-1} for a full row rank A.
Matrix RightPinv(const Matrix& A);

// I - A^+ A, the orthogonal projector onto the nullspace of A.
Matrix NullspaceProjector(const Matrix& A);

// Symmetric positive definite square root.
Matrix SqrtSpd(const Matrix& S);

}  // namespace pgac

#endif  // PGAC_MATOPS_H_
