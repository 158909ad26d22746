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

#include "nsqbc/qmath.h"

namespace nsqbc {

enum class StateSourceKind { full_bloch, subcircle_continuous, subcircle_discretized };

/// Where random qubit states come from: the TTP basis source in the protocol,
/// and the sampler in Monte Carlo estimates.
struct StateSource {
    StateSourceKind kind = StateSourceKind::subcircle_discretized;
    /// Number of evenly spaced sub-circle points, angles 2*pi*j/k.
    int k = 8;

    static StateSource full_bloch() {
        return {StateSourceKind::full_bloch, 0};
    }
    static StateSource subcircle() {
        return {StateSourceKind::subcircle_continuous, 0};
    }
    static StateSource subcircle_points(int k) {
        return {StateSourceKind::subcircle_discretized, k};
    }

    /// Throws ValidationError when k < 2 for the discretized kind.
    void validate() const;
    UnitVector2 sample(Rng &rng) const;
};

const char *to_string(StateSourceKind kind);

}  // namespace nsqbc
