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

#ifndef PGAC_DATAFLOW_H_
#define PGAC_DATAFLOW_H_

#include <optional>
#include <vector>

#include "pgac/matops.h"

namespace pgac {

// Growing input/state data series with its sample covariance
//   Phi = D0 D0' / t,   D0 = [U0; X0],
// and the derived blocks Ubar = U0 D0'/t, Xbar0 = X0 D0'/t, Xbar1 = X1 D0'/t.
// All blocks are maintained by rank-one updates so that consumers only touch
// (m+n)-sized matrices. Phi^{-1} is maintained by the rank-one inverse update
// once the data is persistently exciting, with a dense refresh every
// kInverseRefreshPeriod updates.
//
// The process noise W0 is an optional simulation-only channel. It is
// available only if every appended sample carried it.
class DataRecord {
 public:
  static constexpr int kInverseRefreshPeriod = 1000;

  DataRecord(Eigen::Index state_dim, Eigen::Index input_dim);

  void Append(const Vector& u, const Vector& x, const Vector& x_next,
              const std::optional<Vector>& w = std::nullopt);

  Eigen::Index size() const { return static_cast<Eigen::Index>(u_.size()); }
  bool empty() const { return u_.empty(); }
  Eigen::Index state_dim() const { return n_; }
  Eigen::Index input_dim() const { return m_; }

  // Full histories, one column per sample.
  Matrix U0() const;
  Matrix X0() const;
  Matrix X1() const;
  Matrix W0() const;  // throws kOracleUnavailable
  Matrix D0() const;

  const Matrix& Phi() const { return phi_; }
  bool HasPhiInv() const { return phi_inv_valid_; }
  const Matrix& PhiInv() const;  // throws kNotPersistentlyExciting
  Matrix Ubar() const { return phi_.topRows(m_); }
  Matrix Xbar0() const { return phi_.bottomRows(n_); }
  const Matrix& Xbar1() const { return xbar1_; }
  bool HasOracle() const { return oracle_ && !empty(); }
  const Matrix& Wbar() const;  // throws kOracleUnavailable

 private:
  void RefreshInverse();

  Eigen::Index n_, m_;
  std::vector<Vector> u_, x_, x_next_, w_;
  Matrix phi_, phi_inv_, xbar1_, wbar_;
  bool phi_inv_valid_ = false;
  bool oracle_ = true;
  int updates_since_refresh_ = 0;
};

struct ModelEstimate {
  Matrix Bhat;  // n x m
  Matrix Ahat;  // n x n

  // [Bhat, Ahat], the n x (m+n) layout matching D0 = [U0; X0].
  Matrix Stacked() const;
  static ModelEstimate FromStacked(const Matrix& theta, Eigen::Index input_dim);
};

// [Bhat, Ahat] = X1 D0^+ = Xbar1 Phi^{-1}. Throws kNotPersistentlyExciting
// unless D0 has full row rank.
ModelEstimate BatchLeastSquares(const DataRecord& record);

// Recursive least-squares step for one new sample (u, x, x_next), where
// `estimate` is the least-squares solution on `record_before`:
//   Theta+ = Theta + (x_next - Theta phi) phi' Phi^{-1} / (t + phi' Phi^{-1} phi)
ModelEstimate RlsUpdate(const ModelEstimate& estimate,
                        const DataRecord& record_before, const Vector& u,
                        const Vector& x, const Vector& x_next);

struct SnrReading {
  double gamma = 0.0;  // sigma_min(Phi)
  double delta = 0.0;  // ||W0 D0' / t||
  double snr = 0.0;    // gamma / delta, +infinity when delta == 0
};

SnrReading ReadSnr(const DataRecord& record);  // throws kOracleUnavailable

// sigma_min(Phi) >= gamma_floor; false for an empty record.
bool PeCheck(const DataRecord& record, double gamma_floor);

}  // namespace pgac

#endif  // PGAC_DATAFLOW_H_
