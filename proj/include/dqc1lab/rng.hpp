// Copyright 2026 The dqc1lab developers
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <random>

namespace dqc1lab {

uint64_t splitmix64(uint64_t x);

/// Seeded random stream. Every randomized routine takes one of these
/// explicitly; there is no global generator state.
///
/// Child streams are derived by a fixed counter scheme,
///   child(k).seed == splitmix64(seed ^ (k + 1) * 0x9E3779B97F4A7C15),
/// so fan-out across seeds, data points or Monte-Carlo lanes is
/// reproducible regardless of evaluation order.
///
/// Uniform and normal variates are generated from the raw mt19937_64
/// output (53-bit mantissa mapping, Box-Muller) rather than through
/// std::*_distribution, whose sequences are implementation-defined.
class RngStream {
  public:
    explicit RngStream(uint64_t seed);

    RngStream child(uint64_t index) const;

    uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform();
    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller (pairs cached).
    double normal();

    /// Uniform integer in [0, bound); bound must be positive.
    uint64_t uniform_int(uint64_t bound);

    /// +1 or -1 with equal probability.
    int rademacher();

    uint64_t seed() const { return seed_; }

  private:
    uint64_t seed_;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace dqc1lab
