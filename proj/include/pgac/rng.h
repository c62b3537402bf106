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

#ifndef PGAC_RNG_H_
#define PGAC_RNG_H_

#include <cstdint>
#include <limits>
#include <random>

#include "pgac/matops.h"

namespace pgac {

enum class StreamId : std::uint64_t {
  kOfflineInput = 1,
  kProcessNoise = 2,
  kProbe = 3,
};

// Counter-based generator: the i-th output is a SplitMix64 mix of
// key + i * golden_gamma, so a stream is fully determined by its key and
// streams with different keys never interact. Satisfies
// UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}
  CounterRng(std::uint64_t seed, std::uint64_t trial, StreamId stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Standard normal vectors drawn from a CounterRng.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t trial, StreamId stream)
      : rng_(seed, trial, stream) {}

  Vector Next(Eigen::Index dim);

 private:
  CounterRng rng_;
  std::normal_distribution<double> normal_;
};

}  // namespace pgac

#endif  // PGAC_RNG_H_
