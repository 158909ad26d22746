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

#include <variant>

#include "nsqbc/qmath.h"

namespace nsqbc {

/// [[a, b], [c, d]] acting on Alice's ancilla. As an attack it must be
/// unitary; analysis code also evaluates non-unitary entries.
struct CoefficientMatrix {
    Complex a{1};
    Complex b{0};
    Complex c{0};
    Complex d{1};

    static CoefficientMatrix from(const Matrix2 &m) {
        return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
    }
    static CoefficientMatrix identity() {
        return {};
    }
    static CoefficientMatrix hadamard();

    Matrix2 matrix() const {
        return {a, b, c, d};
    }
    double unitarity_residual() const {
        return matrix().unitarity_residual();
    }
};

struct HonestAlice {};

/// Keep the commitment purified, apply S to the ancilla at unveil time, then
/// measure it and announce the declared-bit operator matching the outcome.
/// S is the 0 -> 1 coefficient matrix; the 1 -> 0 direction applies its inverse.
struct DelayedAlice {
    CoefficientMatrix S;
    CommitBit declared = CommitBit::one;
    CommitBit actual = CommitBit::zero;
};

/// Oracle cheater who knows each round's state and applies the per-state
/// optimal unitary (or its nearest unitary when none exists).
struct PerStateOptimalAlice {
    CommitBit declared = CommitBit::one;
    CommitBit actual = CommitBit::zero;
};

using AliceStrategy = std::variant<HonestAlice, DelayedAlice, PerStateOptimalAlice>;

struct HonestTtp {};

/// With probability p per round, announce an independently resampled basis.
struct WrongBasisTtp {
    double p = 0;
};

/// Hand Alice a fixed state instead of measuring a singlet.
struct BiasedStateTtp {
    UnitVector2 psi = ket0();
};

using TtpStrategy = std::variant<HonestTtp, WrongBasisTtp, BiasedStateTtp>;

struct HonestBob {};

/// Bob supplies the initial state himself (the variant without a TTP) and
/// performs the Helstrom measurement on what Alice returns.
struct ProbeBob {
    UnitVector2 psi = ket0();
};

/// Bob supplies the first half of a two-qubit state and keeps the second.
struct EntangledProbeBob {
    PureState4 state = singlet();
};

using BobStrategy = std::variant<HonestBob, ProbeBob, EntangledProbeBob>;

/// Throws ValidationError on out-of-range payloads.
void validate(const AliceStrategy &s);
void validate(const TtpStrategy &s);

/// Bit Alice actually commits to under this strategy; `chi` for honest Alice.
CommitBit committed_bit(const AliceStrategy &s, CommitBit chi);

}  // namespace nsqbc
