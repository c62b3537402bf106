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

#include "pgac/matops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pgac/errors.h"

namespace pgac {
namespace {

thread_local std::uint64_t lyapunov_solve_count = 0;

std::string DimString(const Matrix& M) {
  std::ostringstream os;
  os << M.rows() << "x" << M.cols();
  return os.str();
}

}  // namespace

double SpectralRadius(const Matrix& F) {
  if (F.rows() != F.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "spectral radius of non-square " + DimString(F));
  }
  if (F.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(F, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool IsSchurStable(const Matrix& F, double margin) {
  const double rho = SpectralRadius(F);
  return std::isfinite(rho) && rho < 1.0 - margin;
}

double SpectralNorm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

double MinSingularValue(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& s = svd.singularValues();
  // Tall or wide matrices: the smallest of min(rows, cols) singular values.
  return s(s.size() - 1);
}

Matrix Symmetrize(const Matrix& M) { return 0.5 * (M + M.transpose()); }

bool IsSymmetric(const Matrix& M, double rel_tol) {
  if (M.rows() != M.cols()) return false;
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Matrix SolveDlyapClosed(const Matrix& F, const Matrix& W) {
  const Eigen::Index n = F.rows();
  if (F.cols() != n || W.rows() != n || W.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Lyapunov solve with F " + DimString(F) + " and W " +
                    DimString(W));
  }
  if (!IsSymmetric(W)) {
    throw Error(ErrorCode::kNonSymmetric, "Lyapunov constant term");
  }
  const double rho = SpectralRadius(F);
  if (!(rho < 1.0 - kStabilityMargin)) {
    std::ostringstream os;
    os << "spectral radius " << rho;
    throw Error(ErrorCode::kNotStable, os.str());
  }
  ++lyapunov_solve_count;

  // Column-major vec: vec(F X F') = (F kron F) vec(X).
  const Eigen::Index nn = n * n;
  Matrix lhs = Matrix::Identity(nn, nn);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index row = i + j * n;
      for (Eigen::Index l = 0; l < n; ++l) {
        for (Eigen::Index k = 0; k < n; ++k) {
          lhs(row, k + l * n) -= F(i, k) * F(j, l);
        }
      }
    }
  }
  const Vector rhs = W.reshaped();
  const Vector x = lhs.partialPivLu().solve(rhs);
  return Symmetrize(x.reshaped(n, n));
}

Matrix SolveDlyapCost(const Matrix& F, const Matrix& W) {
  return SolveDlyapClosed(F.transpose(), W);
}

std::uint64_t LyapunovSolveCount() { return lyapunov_solve_count; }

double RiccatiResidual(const Matrix& A, const Matrix& B, const Matrix& Q,
                       const Matrix& R, const Matrix& P) {
  const Matrix BtP = B.transpose() * P;
  const Matrix S = R + BtP * B;
  const Matrix defect = A.transpose() * P * A - P + Q -
                        (BtP * A).transpose() * S.ldlt().solve(BtP * A);
  return defect.norm();
}

RiccatiSolution SolveRiccatiHewer(const Matrix& A, const Matrix& B,
                                  const Matrix& Q, const Matrix& R,
                                  const Matrix& K0,
                                  const RiccatiOptions& options) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
      R.rows() != m || R.cols() != m || K0.rows() != m || K0.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "Riccati problem data");
  }
  if (!IsSchurStable(A + B * K0)) {
    throw Error(ErrorCode::kNotStabilizing, "initial gain for Hewer iteration");
  }

  RiccatiSolution sol;
  Matrix K = K0;
  bool converged = false;
  for (int i = 0; i < options.max_iter; ++i) {
    const Matrix P =
        SolveDlyapCost(A + B * K, Symmetrize(Q + K.transpose() * R * K));
    sol.gains.push_back(K);
    sol.costs.push_back(P.trace());
    const Matrix BtP = B.transpose() * P;
    const Matrix K_next = -(R + BtP * B).ldlt().solve(BtP * A);
    const double step = (K_next - K).norm();
    K = K_next;
    sol.iterations = i + 1;
    if (!K.allFinite()) break;
    if (step < options.tol) {
      converged = true;
      break;
    }
    if (!IsSchurStable(A + B * K)) break;
  }
  if (!converged) {
    std::ostringstream os;
    os << "Hewer iteration stopped after " << sol.iterations << " iterations";
    throw Error(ErrorCode::kNoConvergence, os.str());
  }
  sol.gains.push_back(K);
  sol.gain = K;
  sol.value_matrix =
      SolveDlyapCost(A + B * K, Symmetrize(Q + K.transpose() * R * K));
  sol.costs.push_back(sol.value_matrix.trace());
  sol.residual = RiccatiResidual(A, B, Q, R, sol.value_matrix);
  return sol;
}

Matrix RightPinv(const Matrix& A) {
  if (A.rows() == 0 || A.rows() > A.cols()) {
    throw Error(ErrorCode::kRankDeficient,
                "right inverse needs a wide full row rank matrix, got " +
                    DimString(A));
  }
  Eigen::JacobiSVD<Matrix> svd(A);
  const auto& s = svd.singularValues();
  const double threshold = static_cast<double>(A.cols()) *
                           std::numeric_limits<double>::epsilon() * s(0);
  if (!(s(s.size() - 1) > threshold)) {
    throw Error(ErrorCode::kRankDeficient, "right inverse of " + DimString(A));
  }
  const Matrix gram = A * A.transpose();
  return gram.ldlt().solve(A).transpose();
}

Matrix NullspaceProjector(const Matrix& A) {
  const Matrix pinv = RightPinv(A);
  return Symmetrize(Matrix::Identity(A.cols(), A.cols()) - pinv * A);
}

Matrix SqrtSpd(const Matrix& S) {
  if (S.rows() != S.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "square root of " + DimString(S));
  }
  if (!IsSymmetric(S)) {
    throw Error(ErrorCode::kNotPositiveDefinite, "matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(Symmetrize(S));
  if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0)) {
    throw Error(ErrorCode::kNotPositiveDefinite, "matrix has a non-positive eigenvalue");
  }
  const Matrix& V = es.eigenvectors();
  return Symmetrize(V * es.eigenvalues().cwiseSqrt().asDiagonal() *
                    V.transpose());
}

}  // namespace pgac
