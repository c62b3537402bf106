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

#include "pgac/indirect.h"

#include <sstream>

#include "pgac/errors.h"
#include "pgac/plant.h"

namespace pgac {
namespace {

Matrix ClosedLoop(const ModelEstimate& estimate, const Matrix& K) {
  if (K.rows() != estimate.Bhat.cols() || K.cols() != estimate.Ahat.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "gain dimensions");
  }
  Matrix F = estimate.Ahat + estimate.Bhat * K;
  if (!K.allFinite() || !IsSchurStable(F)) {
    std::ostringstream os;
    os << "spectral radius of Ahat + Bhat K is "
       << (F.allFinite() ? SpectralRadius(F) : INFINITY);
    throw Error(ErrorCode::kNotStabilizingForEstimate, os.str());
  }
  return F;
}

// P = Q_l + K'R_l K + K'cross + cross'K + F'PF.
Matrix RegularizedValue(const RegularizedWeights& w, const Matrix& K,
                        const Matrix& F) {
  const Matrix Kt_cross = K.transpose() * w.cross;
  return SolveDlyapCost(
      F, Symmetrize(w.Q_lambda + K.transpose() * w.R_lambda * K + Kt_cross +
                    Kt_cross.transpose()));
}

// R_l K + Bhat' P F + cross, i.e. grad C(K; lambda) Sigma^{-1} / 2.
Matrix NaturalDirection(const ModelEstimate& estimate,
                        const RegularizedWeights& w, const Matrix& K,
                        const Matrix& F, const Matrix& P) {
  return w.R_lambda * K + estimate.Bhat.transpose() * P * F + w.cross;
}

}  // namespace

RegularizedWeights MakeRegularizedWeights(const Matrix& Q, const Matrix& R,
                                          const Matrix& phi_inv,
                                          double lambda) {
  if (lambda < 0.0) {
    throw Error(ErrorCode::kNegativeLambda, "regularization coefficient");
  }
  const Eigen::Index m = R.rows();
  const Eigen::Index n = Q.rows();
  if (phi_inv.rows() != m + n || phi_inv.cols() != m + n) {
    throw Error(ErrorCode::kDimensionMismatch, "Phi^{-1} partition");
  }
  RegularizedWeights w;
  w.lambda = lambda;
  w.Q_lambda = Q + lambda * phi_inv.bottomRightCorner(n, n);
  w.R_lambda = R + lambda * phi_inv.topLeftCorner(m, m);
  w.cross = lambda * phi_inv.topRightCorner(m, n);
  return w;
}

RegularizedWeights PlainWeights(const Matrix& Q, const Matrix& R) {
  return RegularizedWeights{Q, R, Matrix::Zero(R.rows(), Q.rows()), 0.0};
}

CostEvaluation CeCost(const ModelEstimate& estimate, const Matrix& Q,
                      const Matrix& R, const Matrix& K) {
  ClosedLoop(estimate, K);
  return EvaluateLqrCost(estimate.Ahat, estimate.Bhat, Q, R, K);
}

Matrix CeGradient(const ModelEstimate& estimate, const Matrix& Q,
                  const Matrix& R, const Matrix& K) {
  const CostEvaluation eval = CeCost(estimate, Q, R, K);
  return LqrGradientFrom(estimate.Ahat, estimate.Bhat, R, K, eval);
}

Matrix NaturalStep(const ModelEstimate& estimate, const Matrix& Q,
                   const Matrix& R, const Matrix& K, double eta) {
  return NaturalStep(estimate, PlainWeights(Q, R), K, eta);
}

Matrix NaturalStep(const ModelEstimate& estimate,
                   const RegularizedWeights& weights, const Matrix& K,
                   double eta) {
  const Matrix F = ClosedLoop(estimate, K);
  const Matrix P = RegularizedValue(weights, K, F);
  return K - 2.0 * eta * NaturalDirection(estimate, weights, K, F, P);
}

Matrix GaussNewtonStep(const ModelEstimate& estimate, const Matrix& Q,
                       const Matrix& R, const Matrix& K, double eta) {
  return GaussNewtonStep(estimate, PlainWeights(Q, R), K, eta);
}

Matrix GaussNewtonStep(const ModelEstimate& estimate,
                       const RegularizedWeights& weights, const Matrix& K,
                       double eta) {
  const Matrix F = ClosedLoop(estimate, K);
  const Matrix P = RegularizedValue(weights, K, F);
  const Matrix curvature =
      weights.R_lambda + estimate.Bhat.transpose() * P * estimate.Bhat;
  return K - 2.0 * eta *
                 curvature.ldlt().solve(
                     NaturalDirection(estimate, weights, K, F, P));
}

Matrix StackedPolicyCovariance(const Matrix& K, const Matrix& sigma) {
  Matrix stacked(K.rows() + K.cols(), K.cols());
  stacked << K, Matrix::Identity(K.cols(), K.cols());
  return stacked * sigma * stacked.transpose();
}

double RegularizedCeCost(const ModelEstimate& estimate, const Matrix& Q,
                         const Matrix& R, const Matrix& K,
                         const Matrix& phi_inv, double lambda) {
  const RegularizedWeights w = MakeRegularizedWeights(Q, R, phi_inv, lambda);
  const CostEvaluation eval = CeCost(estimate, Q, R, K);
  const Matrix xi = StackedPolicyCovariance(K, eval.sigma);
  return eval.cost + lambda * (phi_inv * xi).trace();
}

Matrix RegularizedGradient(const ModelEstimate& estimate, const Matrix& Q,
                           const Matrix& R, const Matrix& K,
                           const Matrix& phi_inv, double lambda) {
  return RegularizedGradient(
      estimate, MakeRegularizedWeights(Q, R, phi_inv, lambda), K);
}

Matrix RegularizedGradient(const ModelEstimate& estimate,
                           const RegularizedWeights& weights, const Matrix& K) {
  const Matrix F = ClosedLoop(estimate, K);
  const Eigen::Index n = F.rows();
  const Matrix sigma = SolveDlyapClosed(F, Matrix::Identity(n, n));
  const Matrix P = RegularizedValue(weights, K, F);
  return 2.0 * NaturalDirection(estimate, weights, K, F, P) * sigma;
}

Matrix RegularizedCeGain(const ModelEstimate& estimate,
                         const RegularizedWeights& weights) {
  const Eigen::LDLT<Matrix> r_lambda(weights.R_lambda);
  const Matrix shift = r_lambda.solve(weights.cross);  // R_l^{-1} cross
  const Matrix A = estimate.Ahat - estimate.Bhat * shift;
  const Matrix Q = Symmetrize(weights.Q_lambda - weights.cross.transpose() * shift);
  try {
    return OptimalGainForModel(A, estimate.Bhat, Q, weights.R_lambda).gain - shift;
  } catch (const Error& e) {
    throw Error(ErrorCode::kInitialGainUnstable, e.what());
  }
}

}  // namespace pgac
