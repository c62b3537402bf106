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

#include "pgac/dataflow.h"

#include <cmath>
#include <limits>

#include "pgac/errors.h"

namespace pgac {
namespace {

Matrix Columns(const std::vector<Vector>& cols, Eigen::Index rows) {
  Matrix out(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = cols[i];
  }
  return out;
}

// Full rank test on the (symmetric PSD) covariance.
bool CovarianceInvertible(const Matrix& phi) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(phi, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double top = ev(ev.size() - 1);
  return top > 0.0 && ev(0) > 1e-12 * top;
}

}  // namespace

DataRecord::DataRecord(Eigen::Index state_dim, Eigen::Index input_dim)
    : n_(state_dim),
      m_(input_dim),
      phi_(Matrix::Zero(state_dim + input_dim, state_dim + input_dim)),
      xbar1_(Matrix::Zero(state_dim, state_dim + input_dim)),
      wbar_(Matrix::Zero(state_dim, state_dim + input_dim)) {
  if (state_dim < 1 || input_dim < 1) {
    throw Error(ErrorCode::kDimensionMismatch, "record dimensions");
  }
}

void DataRecord::Append(const Vector& u, const Vector& x, const Vector& x_next,
                        const std::optional<Vector>& w) {
  if (u.size() != m_ || x.size() != n_ || x_next.size() != n_ ||
      (w && w->size() != n_)) {
    throw Error(ErrorCode::kDimensionMismatch, "appended sample");
  }
  Vector phi(m_ + n_);
  phi << u, x;
  const double t = static_cast<double>(size());
  const double t1 = t + 1.0;

  phi_ = Symmetrize((t * phi_ + phi * phi.transpose()) / t1);
  xbar1_ = (t * xbar1_ + x_next * phi.transpose()) / t1;
  if (w) {
    wbar_ = (t * wbar_ + *w * phi.transpose()) / t1;
  } else {
    oracle_ = false;
  }

  if (phi_inv_valid_) {
    // (t Phi + phi phi')^{-1} = (G - G phi phi' G / (t + phi' G phi)) / t
    const Vector g_phi = phi_inv_ * phi;
    const double denom = t + phi.dot(g_phi);
    phi_inv_ = Symmetrize((phi_inv_ - g_phi * g_phi.transpose() / denom) *
                          (t1 / t));
    if (++updates_since_refresh_ >= kInverseRefreshPeriod) RefreshInverse();
  }

  u_.push_back(u);
  x_.push_back(x);
  x_next_.push_back(x_next);
  if (oracle_) w_.push_back(*w);

  if (!phi_inv_valid_ && size() >= m_ + n_) RefreshInverse();
}

void DataRecord::RefreshInverse() {
  updates_since_refresh_ = 0;
  if (!CovarianceInvertible(phi_)) {
    phi_inv_valid_ = false;
    return;
  }
  const Eigen::Index d = m_ + n_;
  phi_inv_ = Symmetrize(phi_.ldlt().solve(Matrix::Identity(d, d)));
  phi_inv_valid_ = true;
}

Matrix DataRecord::U0() const { return Columns(u_, m_); }
Matrix DataRecord::X0() const { return Columns(x_, n_); }
Matrix DataRecord::X1() const { return Columns(x_next_, n_); }

Matrix DataRecord::W0() const {
  if (!HasOracle()) {
    throw Error(ErrorCode::kOracleUnavailable, "noise channel not populated");
  }
  return Columns(w_, n_);
}

Matrix DataRecord::D0() const {
  Matrix out(m_ + n_, size());
  out << U0(), X0();
  return out;
}

const Matrix& DataRecord::PhiInv() const {
  if (!phi_inv_valid_) {
    throw Error(ErrorCode::kNotPersistentlyExciting,
                "sample covariance is singular");
  }
  return phi_inv_;
}

const Matrix& DataRecord::Wbar() const {
  if (!HasOracle()) {
    throw Error(ErrorCode::kOracleUnavailable, "noise channel not populated");
  }
  return wbar_;
}

Matrix ModelEstimate::Stacked() const {
  Matrix theta(Ahat.rows(), Bhat.cols() + Ahat.cols());
  theta << Bhat, Ahat;
  return theta;
}

ModelEstimate ModelEstimate::FromStacked(const Matrix& theta,
                                         Eigen::Index input_dim) {
  return ModelEstimate{theta.leftCols(input_dim),
                       theta.rightCols(theta.cols() - input_dim)};
}

ModelEstimate BatchLeastSquares(const DataRecord& record) {
  if (record.size() < record.state_dim() + record.input_dim() ||
      !CovarianceInvertible(record.Phi())) {
    throw Error(ErrorCode::kNotPersistentlyExciting,
                "input-state data does not have full row rank");
  }
  // Phi is symmetric, so Xbar1 Phi^{-1} = (Phi^{-1} Xbar1')'.
  const Matrix theta =
      record.Phi().ldlt().solve(record.Xbar1().transpose()).transpose();
  return ModelEstimate::FromStacked(theta, record.input_dim());
}

ModelEstimate RlsUpdate(const ModelEstimate& estimate,
                        const DataRecord& record_before, const Vector& u,
                        const Vector& x, const Vector& x_next) {
  const Matrix& G = record_before.PhiInv();
  Vector phi(u.size() + x.size());
  phi << u, x;
  if (phi.size() != G.rows() || x_next.size() != record_before.state_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "RLS sample");
  }
  const Matrix theta = estimate.Stacked();
  const Vector innovation = x_next - theta * phi;
  const Vector g_phi = G * phi;
  const double denom = static_cast<double>(record_before.size()) + phi.dot(g_phi);
  return ModelEstimate::FromStacked(
      theta + innovation * g_phi.transpose() / denom, record_before.input_dim());
}

SnrReading ReadSnr(const DataRecord& record) {
  const Matrix& wbar = record.Wbar();
  SnrReading out;
  Eigen::SelfAdjointEigenSolver<Matrix> es(record.Phi(), Eigen::EigenvaluesOnly);
  out.gamma = std::max(0.0, es.eigenvalues()(0));
  out.delta = SpectralNorm(wbar);
  out.snr = out.delta > 0.0 ? out.gamma / out.delta
                            : std::numeric_limits<double>::infinity();
  return out;
}

bool PeCheck(const DataRecord& record, double gamma_floor) {
  if (record.empty()) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(record.Phi(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) >= gamma_floor;
}

}  // namespace pgac
