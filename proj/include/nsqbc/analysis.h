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
#include <string>
#include <vector>

#include "nsqbc/qmath.h"
#include "nsqbc/state_source.h"
#include "nsqbc/strategies.h"

namespace nsqbc {

struct RhoPair {
    Density2 rho0;
    Density2 rho1;
    double distance;
};

/// rho_chi(psi) = (Op1 |psi><psi| Op1^dagger + Op2 |psi><psi| Op2^dagger) / 2.
RhoPair rho_pair(const OperatorQuadruple &quadruple, const UnitVector2 &psi);

struct ConcealmentReport {
    /// Frobenius residuals of the |0><0|, |1><1| and |0><1| sandwich equations.
    double residual1 = 0;
    double residual2 = 0;
    double residual3 = 0;
    double tol = kUnitarityTol;
    bool passes = false;
};

ConcealmentReport concealment_check(const OperatorQuadruple &quadruple, double tol = kUnitarityTol);

struct ProbeWitness {
    std::string name;
    UnitVector2 probe;
    double distance;
};

/// The six probes |0>, |1>, |+>, |->, |+i>, |-i>, in that order.
std::vector<ProbeWitness> canonical_probes(const OperatorQuadruple &quadruple);
/// Canonical probe with the largest rho_pair distance (first on ties).
ProbeWitness strongest_probe(const OperatorQuadruple &quadruple);

/// Success of the 0 -> 1 attack S at psi:
/// (F(aM psi + bN psi, J psi) + F(cM psi + dN psi, K psi)) / 2 with F on the unnormalized vectors.
double cheat_success(const OperatorQuadruple &quadruple, const CoefficientMatrix &S, const UnitVector2 &psi);

struct ClosedFormFidelity {
    double value;
    /// false when S was not unitary and the unsimplified form was used.
    bool unitary_evaluation;
};

/// Bloch-sphere average of cheat_success for the standard quadruple:
/// 1/2 + Re(a conj(b)) / 3 for unitary S, otherwise
/// (|a|^2 + |b|^2 + |c|^2 + |d|^2)/4 + Re(a conj(b) - c conj(d))/6.
ClosedFormFidelity expected_cheat_fidelity_closed(const CoefficientMatrix &S);

struct FidelityEstimate {
    double mean = 0;
    double std_error = 0;
    std::int64_t samples = 0;
    StateSource sampler;
};

inline constexpr std::int64_t kMonteCarloBlock = 4096;

/// Monte Carlo mean of cheat_success over n sampled states. Samples are
/// drawn in blocks of kMonteCarloBlock, block b from
/// Rng::substream(base, mc_block, b) with base taken from rng; block sums are
/// combined in block order, so the estimate does not depend on `threads`.
FidelityEstimate expected_cheat_fidelity_mc(const OperatorQuadruple &quadruple, const CoefficientMatrix &S,
                                            const StateSource &sampler, std::int64_t n, Rng &rng,
                                            unsigned threads = 1);

/// 1 - per_round_success^n_rounds
double detection_probability(std::int64_t n_rounds, double per_round_success);

struct Table2Params {
    Complex x{0};
    Complex y{1};
    Complex alpha{1};
    CoefficientMatrix first_coeffs;
    CoefficientMatrix second_coeffs;
};

/// M = I, N|0> = x|0> + y|1>, N|1> = alpha(conj(y)|0> - conj(x)|1>),
/// J|0> = (a + bx)|0> + by|1>, J|1> = t alpha conj(y)|0> + (s - t alpha conj(x))|1>,
/// K likewise with (c, d) and (u, v). Throws ValidationError if the
/// parameters are out of range or J, K come out non-unitary.
OperatorQuadruple table2_quadruple(const Table2Params &params);

struct Table3Params {
    Complex j{1}, k{1}, l{1}, m{1};
    Complex alpha{1}, beta{1}, gamma{1}, delta{1};
};

struct Table3Result {
    OperatorQuadruple quadruple;
    Complex lhs;  // j conj(k) + l conj(m)
    Complex rhs;  // alpha conj(beta) + gamma conj(delta)
    bool condition_holds;
};

Table3Result table3_quadruple(const Table3Params &params, double tol = kNormTol);

}  // namespace nsqbc
