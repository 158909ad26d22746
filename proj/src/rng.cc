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

#include "nsqbc/rng.h"

namespace nsqbc {

namespace {

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t domain, std::uint64_t index) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(domain),
        static_cast<std::uint32_t>(index),
        static_cast<std::uint32_t>(index >> 32),
    };
    return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(seeded(seed, 0, 0)) {
}

Rng Rng::substream(std::uint64_t seed, StreamDomain domain, std::uint64_t index) {
    Rng r(0);
    r.engine_ = seeded(seed, static_cast<std::uint64_t>(domain), index);
    return r;
}

double Rng::uniform() {
    // 53 random mantissa bits.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
}

bool Rng::bernoulli(double p) {
    return uniform() < p;
}

double Rng::normal() {
    return std::normal_distribution<double>()(engine_);
}

std::uint64_t Rng::next_u64() {
    return engine_();
}

}  // namespace nsqbc
