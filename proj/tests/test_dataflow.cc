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

#include <gtest/gtest.h>

#include <limits>

#include "pgac/errors.h"
#include "pgac/rng.h"
#include "test_util.h"

namespace pgac {
namespace {

using testing::RandomMatrix;
using testing::Rng;

Matrix BatchPhi(const DataRecord& r) {
  const Matrix D = r.D0();
  return D * D.transpose() / static_cast<double>(r.size());
}

TEST(DataRecord, FirstAppend) {
  DataRecord r(2, 1);
  Vector u(1), x(2), xn(2);
  u << 2.0;
  x << 1.0, -1.0;
  xn << 0.5, 0.5;
  r.Append(u, x, xn);
  EXPECT_EQ(r.size(), 1);
  Vector phi(3);
  phi << 2.0, 1.0, -1.0;
  EXPECT_TRUE(r.Phi().isApprox(phi * phi.transpose(), 1e-15));
  EXPECT_FALSE(r.HasPhiInv());
  EXPECT_FALSE(r.HasOracle());
  EXPECT_THROW(r.PhiInv(), Error);
}

TEST(DataRecord, RejectsWrongDimensions) {
  DataRecord r(2, 1);
  EXPECT_THROW(r.Append(Vector::Zero(2), Vector::Zero(2), Vector::Zero(2)), Error);
}

TEST(DataRecord, IncrementalMatchesBatch) {
  Rng rng(3);
  const LinearQuadraticPlant plant = testing::RandomPlant(rng, 3, 2);
  const Matrix K = testing::RandomStabilizingGain(rng, plant);
  DataRecord r = testing::SimulateRecord(rng, plant, K, 0);
  Vector x = Vector::Zero(3);
  for (int t = 0; t < 300; ++t) {
    const Vector u = K * x + RandomMatrix(rng, 2, 1);
    const Vector w = RandomMatrix(rng, 3, 1);
    const Vector xn = plant.A() * x + plant.B() * u + w;
    r.Append(u, x, xn, w);
    x = xn;
    const Matrix D = r.D0();
    const double t1 = static_cast<double>(r.size());
    const Matrix phi = BatchPhi(r);
    ASSERT_LT((r.Phi() - phi).norm(), 1e-10 * std::max(1.0, phi.norm()));
    ASSERT_LT((r.Xbar1() - r.X1() * D.transpose() / t1).norm(),
              1e-10 * std::max(1.0, phi.norm()));
    ASSERT_LT((r.Wbar() - r.W0() * D.transpose() / t1).norm(), 1e-10 * std::max(1.0, phi.norm()));
    // Row-block identity Phi = [Ubar; Xbar0].
    Matrix stacked(5, 5);
    stacked << r.Ubar(), r.Xbar0();
    ASSERT_EQ((stacked - r.Phi()).norm(), 0.0);
    if (r.HasPhiInv()) {
      ASSERT_LT((r.PhiInv() - phi.inverse()).norm() / phi.inverse().norm(), 1e-8);
      ASSERT_LT((r.Phi() * r.PhiInv() - Matrix::Identity(5, 5)).norm(), 1e-8);
    }
  }
  EXPECT_TRUE(r.HasPhiInv());
  // The data equation holds exactly in oracle mode.
  EXPECT_LT((r.X1() - plant.A() * r.X0() - plant.B() * r.U0() - r.W0()).norm(),
            1e-12 * r.X1().norm());
}

TEST(DataRecord, InverseStaysAccurateAcrossRefresh) {
  Rng rng(9);
  const LinearQuadraticPlant plant = LinearQuadraticPlant::Benchmark();
  const Matrix K = OptimalGain(plant).gain;
  const DataRecord r =
      testing::SimulateRecord(rng, plant, K, DataRecord::kInverseRefreshPeriod + 250);
  const Matrix inv = BatchPhi(r).inverse();
  EXPECT_LT((r.PhiInv() - inv).norm() / inv.norm(), 1e-8);
}

TEST(DataRecord, OracleRequiresEverySample) {
  DataRecord r(1, 1);
  r.Append(Vector::Ones(1), Vector::Ones(1), Vector::Ones(1), Vector::Zero(1));
  EXPECT_TRUE(r.HasOracle());
  r.Append(Vector::Ones(1), Vector::Ones(1), Vector::Ones(1));
  EXPECT_FALSE(r.HasOracle());
  try {
    r.W0();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOracleUnavailable);
  }
}

TEST(LeastSquares, NoiselessRecovery) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const LinearQuadraticPlant plant = testing::RandomPlant(rng, 3, 2);
    const Matrix K = testing::RandomStabilizingGain(rng, plant);
    const DataRecord r = testing::SimulateRecord(rng, plant, K, 30, 0.0);
    const ModelEstimate est = BatchLeastSquares(r);
    EXPECT_LT((est.Ahat - plant.A()).norm(), 1e-8);
    EXPECT_LT((est.Bhat - plant.B()).norm(), 1e-8);
    EXPECT_LT((est.Stacked() - r.Xbar1() * r.PhiInv()).norm(), 1e-8);
  }
}

TEST(LeastSquares, TooFewSamples) {
  Rng rng(5);
  const LinearQuadraticPlant plant = testing::RandomPlant(rng, 3, 2);
  const DataRecord r = testing::SimulateRecord(rng, plant, Matrix::Zero(2, 3), 4);
  try {
    BatchLeastSquares(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPersistentlyExciting);
  }
}

TEST(LeastSquares, IdentificationBoundBySnr) {
  Rng rng(12);
  const LinearQuadraticPlant plant = LinearQuadraticPlant::Benchmark();
  const Matrix truth = (Matrix(3, 6) << plant.B(), plant.A()).finished();
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix K = testing::RandomStabilizingGain(rng, plant);
    const int samples = 10 + trial * 5;
    const DataRecord r = testing::SimulateRecord(rng, plant, K, samples);
    const SnrReading snr = ReadSnr(r);
    const double err = SpectralNorm(BatchLeastSquares(r).Stacked() - truth);
    EXPECT_LE(err, 1.0 / snr.snr * (1.0 + 1e-10));
  }
}

TEST(Rls, MatchesBatchOnEveryStep) {
  Rng rng(6);
  const LinearQuadraticPlant plant = testing::RandomPlant(rng, 3, 2);
  const Matrix K = testing::RandomStabilizingGain(rng, plant);
  DataRecord r = testing::SimulateRecord(rng, plant, K, 10);
  ModelEstimate est = BatchLeastSquares(r);
  Vector x = r.X1().col(r.size() - 1);
  for (int t = 0; t < 200; ++t) {
    const Vector u = K * x + RandomMatrix(rng, 2, 1);
    const Vector w = RandomMatrix(rng, 3, 1);
    const Vector xn = plant.A() * x + plant.B() * u + w;
    est = RlsUpdate(est, r, u, x, xn);
    r.Append(u, x, xn, w);
    x = xn;
    ASSERT_LT((est.Stacked() - BatchLeastSquares(r).Stacked()).norm(), 1e-8);
  }
}

TEST(Rls, ZeroInnovationAndNoiseless) {
  Rng rng(7);
  const LinearQuadraticPlant plant = testing::RandomPlant(rng, 2, 1);
  const Matrix K = testing::RandomStabilizingGain(rng, plant);
  DataRecord r = testing::SimulateRecord(rng, plant, K, 10);
  const ModelEstimate est = BatchLeastSquares(r);
  const Vector u = RandomMatrix(rng, 1, 1), x = RandomMatrix(rng, 2, 1);
  const Vector xn = est.Ahat * x + est.Bhat * u;
  const ModelEstimate same = RlsUpdate(est, r, u, x, xn);
  EXPECT_LT((same.Stacked() - est.Stacked()).norm(), 1e-14);

  DataRecord clean = testing::SimulateRecord(rng, plant, K, 10, 0.0);
  ModelEstimate e = BatchLeastSquares(clean);
  Vector s = clean.X1().col(clean.size() - 1);
  for (int t = 0; t < 50; ++t) {
    const Vector v = K * s + RandomMatrix(rng, 1, 1);
    const Vector sn = plant.A() * s + plant.B() * v;
    e = RlsUpdate(e, clean, v, s, sn);
    clean.Append(v, s, sn);
    s = sn;
  }
  EXPECT_LT((e.Ahat - plant.A()).norm(), 1e-8);
  EXPECT_LT((e.Bhat - plant.B()).norm(), 1e-8);
}

TEST(Snr, Readings) {
  Rng rng(8);
  const LinearQuadraticPlant plant = LinearQuadraticPlant::Benchmark();
  const Matrix K = OptimalGain(plant).gain;
  const DataRecord clean = testing::SimulateRecord(rng, plant, K, 20, 0.0);
  const SnrReading s0 = ReadSnr(clean);
  EXPECT_EQ(s0.delta, 0.0);
  EXPECT_EQ(s0.snr, std::numeric_limits<double>::infinity());

  const DataRecord noisy = testing::SimulateRecord(rng, plant, K, 50);
  const SnrReading s = ReadSnr(noisy);
  const Eigen::JacobiSVD<Matrix> svd(BatchPhi(noisy));
  EXPECT_NEAR(s.gamma, svd.singularValues().minCoeff(), 1e-10);
  EXPECT_NEAR(s.snr, s.gamma / s.delta, 1e-12 * s.snr);

  DataRecord blind(1, 1);
  blind.Append(Vector::Ones(1), Vector::Ones(1), Vector::Ones(1));
  EXPECT_THROW(ReadSnr(blind), Error);
}

TEST(Snr, DeltaDecaysLikeInverseSqrt) {
  const LinearQuadraticPlant plant = LinearQuadraticPlant::Benchmark();
  const Matrix K = OptimalGain(plant).gain;
  std::vector<double> early, late;
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(100 + seed);
    DataRecord r = testing::SimulateRecord(rng, plant, K, 100);
    early.push_back(ReadSnr(r).delta);
    Vector x = r.X1().col(r.size() - 1);
    for (int t = 0; t < 9900; ++t) {
      const Vector u = K * x + RandomMatrix(rng, 3, 1);
      const Vector w = RandomMatrix(rng, 3, 1);
      const Vector xn = plant.A() * x + plant.B() * u + w;
      r.Append(u, x, xn, w);
      x = xn;
    }
    late.push_back(ReadSnr(r).delta);
  }
  std::sort(early.begin(), early.end());
  std::sort(late.begin(), late.end());
  // 100x more data: the median should shrink by about 10x.
  const double ratio = early[10] / late[10];
  EXPECT_GT(ratio, 5.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(PeCheck, Examples) {
  EXPECT_FALSE(PeCheck(DataRecord(2, 1), 0.0));
  // Columns +-sqrt(3) e_i give Phi = I.
  DataRecord r(2, 1);
  const double s = std::sqrt(3.0);
  for (double sign : {1.0, -1.0}) {
    r.Append(sign * s * Vector::Ones(1), Vector::Zero(2), Vector::Zero(2));
    r.Append(Vector::Zero(1), sign * s * Vector::Unit(2, 0), Vector::Zero(2));
    r.Append(Vector::Zero(1), sign * s * Vector::Unit(2, 1), Vector::Zero(2));
  }
  EXPECT_TRUE(r.Phi().isApprox(Matrix::Identity(3, 3), 1e-14));
  EXPECT_TRUE(PeCheck(r, 1.0 - 1e-12));
  EXPECT_FALSE(PeCheck(r, 1.5));
}

TEST(PeCheck, BenchmarkOfflineData) {
  const LinearQuadraticPlant plant = LinearQuadraticPlant::Benchmark();
  int passed = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GaussianStream input(seed, 0, StreamId::kOfflineInput);
    GaussianStream noise(seed, 0, StreamId::kProcessNoise);
    DataRecord r(3, 3);
    Vector x = Vector::Zero(3);
    for (int t = 0; t < 20; ++t) {
      const Vector u = input.Next(3), w = noise.Next(3);
      const Vector xn = plant.A() * x + plant.B() * u + w;
      r.Append(u, x, xn, w);
      x = xn;
    }
    passed += PeCheck(r, 1e-3);
  }
  EXPECT_GE(passed, 95);
}

}  // namespace
}  // namespace pgac
