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

#include <gtest/gtest.h>

#include <vector>

#include "pgac/errors.h"
#include "test_util.h"

namespace pgac {
namespace {

using testing::Rng;

constexpr double kBenchmarkCost = 3.0030576454693803;
constexpr double kBenchmarkSigmaNorm = 1.0000010445855818;

Matrix Scalar(double v) { return Matrix::Constant(1, 1, v); }

LinearQuadraticPlant ScalarPlant(double a, double b, double q, double r) {
  return LinearQuadraticPlant(Scalar(a), Scalar(b), Scalar(q), Scalar(r));
}

LinearQuadraticPlant ZeroPlant(Eigen::Index n) {
  const Matrix I = Matrix::Identity(n, n);
  return LinearQuadraticPlant(Matrix::Zero(n, n), I, I, I);
}

TEST(Plant, ValidatesConstruction) {
  const Matrix I = Matrix::Identity(2, 2);
  const auto code_of = [](auto&& make) {
    try {
      make();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  EXPECT_EQ(code_of([&] { LinearQuadraticPlant(I, Matrix::Identity(3, 3), I, I); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(code_of([&] { LinearQuadraticPlant(I, I, -I, I); }),
            ErrorCode::kNotPositiveDefinite);
  Matrix B = Matrix::Zero(2, 1);
  B(0, 0) = 1.0;
  EXPECT_EQ(code_of([&] {
              LinearQuadraticPlant(I, B, I, Matrix::Identity(1, 1));
            }),
            ErrorCode::kRankDeficient);
}

TEST(Plant, StepExamples) {
  const LinearQuadraticPlant zero = ZeroPlant(3);
  const StepResult s0 = Step(zero, Vector::Zero(3), Vector::Zero(3), Vector::Zero(3));
  EXPECT_EQ(s0.next_state.norm(), 0.0);
  EXPECT_EQ(s0.performance.norm(), 0.0);

  const Matrix I = Matrix::Identity(2, 2);
  const LinearQuadraticPlant identity(I, I, I, I);
  const Vector e1 = Vector::Unit(2, 0);
  EXPECT_EQ(Step(identity, e1, Vector::Zero(2), Vector::Zero(2)).next_state, e1);

  const StepResult b = Step(LinearQuadraticPlant::Benchmark(), Vector::Unit(3, 0),
                            Vector::Zero(3), Vector::Zero(3));
  EXPECT_NEAR(b.next_state(0), 1.01, 1e-15);
  EXPECT_NEAR(b.next_state(1), 0.01, 1e-15);
  EXPECT_EQ(b.next_state(2), 0.0);
  EXPECT_THROW(Step(identity, Vector::Zero(3), Vector::Zero(2), Vector::Zero(2)), Error);
}

TEST(Plant, PerformanceOutputNorm) {
  Rng rng(1);
  const LinearQuadraticPlant plant = testing::RandomPlant(rng, 3, 2);
  const Vector x = testing::RandomMatrix(rng, 3, 1);
  const Vector u = testing::RandomMatrix(rng, 2, 1);
  const StepResult s = Step(plant, x, u, Vector::Zero(3));
  const double expected = x.dot(plant.Q() * x) + u.dot(plant.R() * u);
  EXPECT_NEAR(s.performance.squaredNorm(), expected, 1e-12 * expected);
}

TEST(LqrCost, Examples) {
  const CostEvaluation scalar = LqrCost(ScalarPlant(0.0, 1.0, 1.0, 1.0), Scalar(0.0));
  EXPECT_NEAR(scalar.cost, 1.0, 1e-15);
  EXPECT_NEAR(scalar.sigma(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(scalar.value(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(LqrCost(ZeroPlant(3), Matrix::Zero(3, 3)).cost, 3.0, 1e-14);
  EXPECT_THROW(LqrCost(LinearQuadraticPlant::Benchmark(), Matrix::Zero(3, 3)), Error);
}

TEST(LqrCost, TraceIdentityAndBounds) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const LinearQuadraticPlant plant =
        trial % 2 == 0 ? LinearQuadraticPlant::Benchmark() : testing::RandomPlant(rng, 3, 2);
    const Matrix K = testing::RandomStabilizingGain(rng, plant, 1.0);
    const CostEvaluation e = LqrCost(plant, K);
    EXPECT_NEAR(e.cost, e.value.trace(), 1e-10 * e.cost);
    EXPECT_NEAR(e.cost, ((plant.Q() + K.transpose() * plant.R() * K) * e.sigma).trace(),
                1e-10 * e.cost);
    // Cost bounds for any stabilizing gain.
    EXPECT_LE(SpectralNorm(e.sigma), e.cost / MinSingularValue(plant.Q()) * (1 + 1e-10));
    EXPECT_LE(SpectralNorm(e.value), e.cost * (1 + 1e-10));
    EXPECT_LE(K.norm(), std::sqrt(e.cost / MinSingularValue(plant.R())) * (1 + 1e-10));
  }
}

TEST(Gradient, ScalarHandValue) {
  EXPECT_NEAR(ExactGradient(ScalarPlant(0.5, 1.0, 1.0, 1.0), Scalar(0.0))(0, 0),
              16.0 / 9.0, 1e-13);
}

TEST(Gradient, MatchesFiniteDifferences) {
  Rng rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const LinearQuadraticPlant plant = trial % 2 == 0 ? LinearQuadraticPlant::Benchmark()
                                                      : testing::RandomScalarPlant(rng);
    const Matrix K = testing::RandomStabilizingGain(rng, plant);
    const Matrix fd = testing::FiniteDifferenceGradient(
        [&](const Matrix& k) { return LqrCost(plant, k).cost; }, K);
    EXPECT_LT(testing::RelativeError(ExactGradient(plant, K), fd), 1e-4);
  }
}

TEST(OptimalGain, Examples) {
  EXPECT_LT(OptimalGain(ZeroPlant(3)).gain.norm(), 1e-14);
  EXPECT_NEAR(OptimalGain(ScalarPlant(0.5, 1.0, 1.0, 1.0)).gain(0, 0), -0.26556, 1e-5);
  const LinearQuadraticPlant plant = LinearQuadraticPlant::Benchmark();
  const OptimalSolution s = OptimalGain(plant);
  EXPECT_NEAR(s.evaluation.cost, kBenchmarkCost, 1e-9);
  EXPECT_NEAR(SpectralNorm(s.evaluation.sigma), kBenchmarkSigmaNorm, 1e-10);
  EXPECT_LT(ExactGradient(plant, s.gain).norm(), 1e-6);
  EXPECT_LT(s.riccati.residual, 1e-8);
}

TEST(OptimalGain, UnstableOpenLoopSeeding) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const LinearQuadraticPlant plant = testing::RandomPlant(rng, 4, 2);
    const OptimalSolution s = OptimalGain(plant);
    EXPECT_TRUE(IsSchurStable(plant.A() + plant.B() * s.gain));
    EXPECT_LT(ExactGradient(plant, s.gain).norm(), 1e-6 * std::max(1.0, s.evaluation.cost));
  }
}

TEST(Certificate, ZeroPlant) {
  const StabilityCertificate c = StrongStabilityCertificate(ZeroPlant(3), Matrix::Zero(3, 3));
  EXPECT_TRUE(c.H.isApprox(Matrix::Identity(3, 3), 1e-14));
  EXPECT_LT(c.L.norm(), 1e-14);
  // C = n here, so kappa = sqrt(n).
  EXPECT_NEAR(c.kappa, std::sqrt(3.0), 1e-14);
  EXPECT_GT(c.alpha, 0.0);
  EXPECT_LE(c.alpha, 1.0);
}

TEST(Certificate, FloorsKappaAtOne) {
  const StabilityCertificate c =
      StrongStabilityCertificate(ScalarPlant(0.0, 1.0, 1.0, 1.0), Scalar(0.0));
  EXPECT_EQ(c.kappa, 1.0);
  EXPECT_EQ(c.alpha, 1.0);
}

TEST(Certificate, ReconstructionOnRandomGains) {
  Rng rng(31);
  const LinearQuadraticPlant plant = LinearQuadraticPlant::Benchmark();
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix K = trial == 0 ? OptimalGain(plant).gain
                                : testing::RandomStabilizingGain(rng, plant);
    const StabilityCertificate c = StrongStabilityCertificate(plant, K);
    const Matrix F = plant.A() + plant.B() * K;
    EXPECT_LT((F - c.H * c.L * c.H.inverse()).norm(), 1e-8);
    EXPECT_LE(SpectralNorm(c.L), 1.0 - c.alpha + 1e-10);
    EXPECT_LE(SpectralNorm(c.H) * SpectralNorm(c.H.inverse()), c.kappa + 1e-10);
    EXPECT_LE(SpectralNorm(K), c.kappa + 1e-10);
    EXPECT_GE(c.kappa, 1.0);
  }
}

TEST(Certificate, RejectsNonStabilizing) {
  EXPECT_THROW(StrongStabilityCertificate(LinearQuadraticPlant::Benchmark(),
                                          Matrix::Zero(3, 3)),
               Error);
}

TEST(Sequential, ConstantSequencePasses) {
  const LinearQuadraticPlant plant = LinearQuadraticPlant::Benchmark();
  const Matrix K = OptimalGain(plant).gain;
  const StabilityCertificate c = StrongStabilityCertificate(plant, K);
  const std::vector<Matrix> gains = {K, K, K};
  const SequentialStabilityReport r = SequentialStabilityCheck(plant, gains, c.kappa, c.alpha);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.max_drift, 1.0, 1e-12);
  EXPECT_FALSE(r.first_violation.has_value());
}

TEST(Sequential, EmptyAndSingleton) {
  const LinearQuadraticPlant plant = LinearQuadraticPlant::Benchmark();
  EXPECT_TRUE(SequentialStabilityCheck(plant, {}, 2.0, 0.5).passed());
  const std::vector<Matrix> one = {OptimalGain(plant).gain};
  EXPECT_TRUE(SequentialStabilityCheck(plant, one, 10.0, 0.5).passed());
}

TEST(Sequential, FlagsDriftAtReplacedGain) {
  const LinearQuadraticPlant plant = LinearQuadraticPlant::Benchmark();
  const Matrix K = OptimalGain(plant).gain;
  const Matrix far = 0.2 * K;
  ASSERT_TRUE(IsSchurStable(plant.A() + plant.B() * far));
  const StabilityCertificate c = StrongStabilityCertificate(plant, K);
  const std::vector<Matrix> gains = {K, K, far, K, K};
  const SequentialStabilityReport r =
      SequentialStabilityCheck(plant, gains, 1e6, c.alpha);
  EXPECT_GT(r.drift_violations, 0);
  ASSERT_TRUE(r.first_violation.has_value());
  EXPECT_TRUE(*r.first_violation == 1 || *r.first_violation == 2);
  EXPECT_GT(r.max_drift, 1.0 + c.alpha / 2.0);
}

TEST(GradientDominance, HoldsEverywhereTested) {
  const LinearQuadraticPlant plant = LinearQuadraticPlant::Benchmark();
  const OptimalSolution opt = OptimalGain(plant);
  EXPECT_NEAR(GradientDominanceGap(plant, opt.gain, opt), 0.0, 1e-8);
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix K = testing::RandomStabilizingGain(rng, plant, 1.0);
    EXPECT_GE(GradientDominanceGap(plant, K, opt), -1e-8);
  }
  EXPECT_GE(GradientDominanceGap(ScalarPlant(0.5, 1.0, 1.0, 1.0), Scalar(0.0)), 0.0);
}

}  // namespace
}  // namespace pgac
