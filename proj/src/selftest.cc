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

#include "pgac/selftest.h"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "pgac/harness.h"
#include "pgac/indirect.h"
#include "pgac/plant.h"

namespace pgac {
namespace {

struct Check {
  std::string name;
  std::function<bool()> run;
};

bool Near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

Matrix Scalar(double v) { return Matrix::Constant(1, 1, v); }

}  // namespace

bool RunSelfTest(std::ostream& out) {
  const std::vector<Check> checks = {
      {"scalar riccati",
       [] {
         const Matrix A = Scalar(0.5), B = Scalar(1.0), I = Scalar(1.0);
         const RiccatiSolution s = SolveRiccatiHewer(A, B, I, I, Scalar(0.0));
         const double p = (0.25 + std::sqrt(0.0625 + 4.0)) / 2;
         return Near(s.value_matrix(0, 0), p, 1e-9) &&
                Near(s.gain(0, 0), -0.5 * p / (1 + p), 1e-9);
       }},
      {"scalar gradient",
       [] {
         const Matrix A = Scalar(0.5), B = Scalar(1.0), I = Scalar(1.0);
         const CostEvaluation e = EvaluateLqrCost(A, B, I, I, Scalar(0.0));
         const Matrix g = LqrGradientFrom(A, B, I, Scalar(0.0), e);
         return Near(g(0, 0), 16.0 / 9.0, 1e-10);
       }},
      {"benchmark optimum",
       [] {
         const OptimalSolution s = OptimalGain(LinearQuadraticPlant::Benchmark());
         return Near(s.evaluation.cost, 3.0030576454693803, 1e-8) &&
                s.riccati.residual < 1e-8;
       }},
      {"benchmark gradient vanishes",
       [] {
         const LinearQuadraticPlant plant = LinearQuadraticPlant::Benchmark();
         const OptimalSolution s = OptimalGain(plant);
         return ExactGradient(plant, s.gain).norm() < 1e-8;
       }},
      {"deterministic trial",
       [] {
         ExperimentConfig cfg;
         cfg.T = 50;
         cfg.controller.method = Method::kDirectVanilla;
         cfg.controller.stepsize = InverseNormMStep{0.01};
         cfg.seed = 7;
         return TrajectoryCsv(RunTrial(cfg, 0)) == TrajectoryCsv(RunTrial(cfg, 0));
       }},
  };
  bool all = true;
  for (const Check& check : checks) {
    bool ok = false;
    try {
      ok = check.run();
    } catch (const std::exception& e) {
      out << "error in " << check.name << ": " << e.what() << '\n';
    }
    out << (ok ? "PASS " : "FAIL ") << check.name << '\n';
    all = all && ok;
  }
  return all;
}

}  // namespace pgac
