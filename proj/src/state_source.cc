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

#include "nsqbc/state_source.h"

#include <numbers>

#include "nsqbc/errors.h"

namespace nsqbc {

void StateSource::validate() const {
    if (kind == StateSourceKind::subcircle_discretized && k < 2) {
        throw ValidationError("discretized sub-circle needs k >= 2, got " + std::to_string(k));
    }
}

UnitVector2 StateSource::sample(Rng &rng) const {
    switch (kind) {
        case StateSourceKind::full_bloch:
            return haar_random_state(rng);
        case StateSourceKind::subcircle_continuous:
            return subcircle_state(rng.uniform(0, 2 * std::numbers::pi));
        case StateSourceKind::subcircle_discretized: {
            auto j = rng.uniform_int(static_cast<std::uint64_t>(k));
            return subcircle_state(2 * std::numbers::pi * static_cast<double>(j) / k);
        }
    }
    throw ValidationError("unknown state source");
}

const char *to_string(StateSourceKind kind) {
    switch (kind) {
        case StateSourceKind::full_bloch:
            return "full_bloch";
        case StateSourceKind::subcircle_continuous:
            return "subcircle_continuous";
        case StateSourceKind::subcircle_discretized:
            return "subcircle_discretized";
    }
    return "unknown";
}

}  // namespace nsqbc
