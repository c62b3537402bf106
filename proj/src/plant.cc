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

#include "pgac/plant.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pgac/errors.h"

namespace pgac {
namespace {

// Slack for the certificate inequalities, which are tight in exact arithmetic
// for some gains (e.g. a deadbeat closed loop).
constexpr double kCertificateSlack = 1e-10;

void RequirePositiveDefinite(const Matrix& M, const char* name) {
  if (!IsSymmetric(M)) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                std::string(name) + " is not symmetric");
  }
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                std::string(name) + " is not positive definite");
  }
}

double MinEigenvalue(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

bool IsControllable(const Matrix& A, const Matrix& B) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  Matrix ctrb(n, n * m);
  Matrix block = B;
  for (Eigen::Index i = 0; i < n; ++i) {
    ctrb.middleCols(i * m, m) = block;
    block = A * block;
  }
  Eigen::JacobiSVD<Matrix> svd(ctrb);
  const auto& s = svd.singularValues();
  if (s.size() < n || s(0) == 0.0) return false;
  return s(n - 1) > 1e-10 * s(0);
}

LinearQuadraticPlant::LinearQuadraticPlant(Matrix A, Matrix B, Matrix Q,
                                           Matrix R)
    : A_(std::move(A)), B_(std::move(B)), Q_(std::move(Q)), R_(std::move(R)) {
  const Eigen::Index n = A_.rows();
  const Eigen::Index m = B_.cols();
  if (n < 1 || m < 1 || A_.cols() != n || B_.rows() != n || Q_.rows() != n ||
      Q_.cols() != n || R_.rows() != m || R_.cols() != m) {
    throw Error(ErrorCode::kDimensionMismatch, "plant matrices");
  }
  if (!A_.allFinite() || !B_.allFinite()) {
    throw Error(ErrorCode::kDimensionMismatch, "plant matrices must be finite");
  }
  RequirePositiveDefinite(Q_, "Q");
  RequirePositiveDefinite(R_, "R");
  if (!IsControllable(A_, B_)) {
    throw Error(ErrorCode::kRankDeficient, "(A, B) is not controllable");
  }
  sqrt_Q_ = SqrtSpd(Q_);
  sqrt_R_ = SqrtSpd(R_);
}

LinearQuadraticPlant LinearQuadraticPlant::Benchmark() {
  Matrix A(3, 3);
  A << 1.01, 0.01, 0.00,
       0.01, 1.01, 0.01,
       0.00, 0.01, 1.01;
  return LinearQuadraticPlant(A, Matrix::Identity(3, 3), Matrix::Identity(3, 3),
                              1e-3 * Matrix::Identity(3, 3));
}

StepResult Step(const LinearQuadraticPlant& plant, const Vector& x,
                const Vector& u, const Vector& w) {
  if (x.size() != plant.state_dim() || w.size() != plant.state_dim() ||
      u.size() != plant.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "plant step vectors");
  }
  StepResult out;
  out.next_state = plant.A() * x + plant.B() * u + w;
  out.performance.resize(x.size() + u.size());
  out.performance << plant.SqrtQ() * x, plant.SqrtR() * u;
  return out;
}

CostEvaluation EvaluateLqrCost(const Matrix& A, const Matrix& B,
                               const Matrix& Q, const Matrix& R,
                               const Matrix& K) {
  if (K.rows() != B.cols() || K.cols() != A.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "gain dimensions");
  }
  const Matrix F = A + B * K;
  if (!K.allFinite() || !IsSchurStable(F)) {
    std::ostringstream os;
    os << "closed-loop spectral radius "
       << (K.allFinite() ? SpectralRadius(F) : INFINITY);
    throw Error(ErrorCode::kNotStabilizing, os.str());
  }
  const Matrix weight = Symmetrize(Q + K.transpose() * R * K);
  CostEvaluation eval;
  eval.sigma = SolveDlyapClosed(F, Matrix::Identity(A.rows(), A.rows()));
  eval.value = SolveDlyapCost(F, weight);
  eval.cost = (weight * eval.sigma).trace();
  return eval;
}

Matrix LqrGradientFrom(const Matrix& A, const Matrix& B, const Matrix& R,
                       const Matrix& K, const CostEvaluation& eval) {
  const Matrix BtP = B.transpose() * eval.value;
  return 2.0 * ((R + BtP * B) * K + BtP * A) * eval.sigma;
}

CostEvaluation LqrCost(const LinearQuadraticPlant& plant, const Matrix& K) {
  return EvaluateLqrCost(plant.A(), plant.B(), plant.Q(), plant.R(), K);
}

Matrix ExactGradient(const LinearQuadraticPlant& plant, const Matrix& K) {
  const CostEvaluation eval = LqrCost(plant, K);
  return LqrGradientFrom(plant.A(), plant.B(), plant.R(), K, eval);
}

Matrix FiniteHorizonGain(const Matrix& A, const Matrix& B, const Matrix& Q,
                         const Matrix& R, int horizon) {
  Matrix P = Q;
  Matrix K = Matrix::Zero(B.cols(), A.rows());
  for (int i = 0; i < horizon; ++i) {
    const Matrix BtP = B.transpose() * P;
    K = -(R + BtP * B).ldlt().solve(BtP * A);
    const Matrix F = A + B * K;
    P = Symmetrize(Q + K.transpose() * R * K + F.transpose() * P * F);
  }
  return K;
}

OptimalSolution OptimalGainForModel(const Matrix& A, const Matrix& B,
                                    const Matrix& Q, const Matrix& R,
                                    const RiccatiOptions& options) {
  Matrix K0 = Matrix::Zero(B.cols(), A.rows());
  if (!IsSchurStable(A)) {
    K0 = FiniteHorizonGain(A, B, Q, R, 200);
    if (!K0.allFinite() || !IsSchurStable(A + B * K0)) {
      throw Error(ErrorCode::kNoConvergence,
                  "finite-horizon recursion did not produce a stabilizing gain");
    }
  }
  OptimalSolution out;
  out.riccati = SolveRiccatiHewer(A, B, Q, R, K0, options);
  out.gain = out.riccati.gain;
  out.evaluation = EvaluateLqrCost(A, B, Q, R, out.gain);
  return out;
}

OptimalSolution OptimalGain(const LinearQuadraticPlant& plant) {
  return OptimalGainForModel(plant.A(), plant.B(), plant.Q(), plant.R());
}

StabilityCertificate StrongStabilityCertificate(
    const LinearQuadraticPlant& plant, const Matrix& K) {
  const CostEvaluation eval = LqrCost(plant, K);
  const Matrix F = plant.A() + plant.B() * K;

  StabilityCertificate cert;
  const double weight_floor =
      std::min(MinEigenvalue(plant.R()), MinEigenvalue(plant.Q()));
  cert.kappa = std::max(1.0, std::sqrt(eval.cost / weight_floor));
  cert.alpha = 1.0 - std::sqrt(std::max(0.0, 1.0 - 1.0 / (cert.kappa * cert.kappa)));
  cert.H = SqrtSpd(eval.sigma);
  const Eigen::LLT<Matrix> h_llt(cert.H);
  cert.L = h_llt.solve(F * cert.H);

  const Matrix H_inv = h_llt.solve(Matrix::Identity(F.rows(), F.rows()));
  const double reconstruction = (F - cert.H * cert.L * H_inv).norm();
  const auto violated = [](double lhs, double rhs) {
    return lhs > rhs + kCertificateSlack * std::max(1.0, rhs);
  };
  std::ostringstream why;
  if (reconstruction > 1e-8 * std::max(1.0, F.norm())) {
    why << "A + BK != H L H^-1 (defect " << reconstruction << ")";
  } else if (violated(SpectralNorm(cert.L), 1.0 - cert.alpha)) {
    why << "||L|| = " << SpectralNorm(cert.L) << " > 1 - alpha";
  } else if (violated(SpectralNorm(cert.H) * SpectralNorm(H_inv), cert.kappa)) {
    why << "condition number of H exceeds kappa";
  } else if (violated(SpectralNorm(K), cert.kappa)) {
    why << "||K|| exceeds kappa";
  }
  if (!why.str().empty()) {
    throw Error(ErrorCode::kCertificateViolated, why.str());
  }
  return cert;
}

SequentialStabilityReport SequentialStabilityCheck(
    const LinearQuadraticPlant& plant, std::span<const Matrix> gains,
    double kappa, double alpha) {
  SequentialStabilityReport report;
  report.length = static_cast<int>(gains.size());
  const Eigen::Index n = plant.state_dim();
  const Matrix I = Matrix::Identity(n, n);
  const auto note = [&report](int t) {
    if (!report.first_violation || t < *report.first_violation) {
      report.first_violation = t;
    }
  };

  Matrix H_prev;
  for (int t = 0; t < report.length; ++t) {
    const Matrix& K = gains[t];
    const CostEvaluation eval = LqrCost(plant, K);
    const Matrix H = SqrtSpd(eval.sigma);
    const Eigen::LLT<Matrix> h_llt(H);
    const Matrix L = h_llt.solve((plant.A() + plant.B() * K) * H);
    const Matrix H_inv = h_llt.solve(I);

    if (SpectralNorm(L) > 1.0 - alpha + kCertificateSlack ||
        SpectralNorm(K) > kappa + kCertificateSlack) {
      ++report.contraction_violations;
      note(t);
    }
    // Sigma >= I, so ||H^{-1}|| <= 1 holds without rescaling H.
    if (SpectralNorm(H) > kappa + kCertificateSlack ||
        SpectralNorm(H_inv) > 1.0 + kCertificateSlack) {
      ++report.transform_violations;
      note(t);
    }
    if (t > 0) {
      const double drift = SpectralNorm(H_inv * H_prev);
      report.max_drift = std::max(report.max_drift, drift);
      if (drift > 1.0 + alpha / 2.0 + kCertificateSlack) {
        ++report.drift_violations;
        note(t - 1);
      }
    }
    H_prev = H;
  }
  return report;
}

double GradientDominanceGap(const LinearQuadraticPlant& plant, const Matrix& K,
                            const OptimalSolution& optimum) {
  const CostEvaluation eval = LqrCost(plant, K);
  const Matrix grad = LqrGradientFrom(plant.A(), plant.B(), plant.R(), K, eval);
  const double mu =
      SpectralNorm(optimum.evaluation.sigma) / MinEigenvalue(plant.R());
  return mu * grad.squaredNorm() - (eval.cost - optimum.evaluation.cost);
}

double GradientDominanceGap(const LinearQuadraticPlant& plant,
                            const Matrix& K) {
  return GradientDominanceGap(plant, K, OptimalGain(plant));
}

}  // namespace pgac
