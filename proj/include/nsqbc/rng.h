// Copyright 2026 The nsqbc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace nsqbc {

/// Independent stream families. A substream is keyed by (seed, domain, index).
enum class StreamDomain : std::uint64_t {
    protocol_round = 1,
    mc_block = 2,
    trial = 3,
    sampler = 4,
};

/// Seedable generator used everywhere randomness is consumed.
///
/// Splitting rule: `Rng::substream(seed, domain, index)` seeds a fresh
/// mt19937_64 from std::seed_seq over the 32-bit halves of seed, the domain
/// tag and the 32-bit halves of index. Protocol round i draws only from
/// substream(seed, protocol_round, i); Monte Carlo block b draws only from
/// substream(block_seed, mc_block, b). Results therefore do not depend on how
/// rounds or blocks are scheduled.
class Rng {
   public:
    explicit Rng(std::uint64_t seed);

    static Rng substream(std::uint64_t seed, StreamDomain domain, std::uint64_t index);

    /// Uniform in [0, 1).
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n);
    bool bernoulli(double p);
    double normal();
    std::uint64_t next_u64();

   private:
    std::mt19937_64 engine_;
};

}  // namespace nsqbc
