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

#include <array>
#include <vector>

#include "nsqbc/protocol.h"
#include "nsqbc/qmath.h"
#include "nsqbc/strategies.h"

namespace nsqbc {

struct DelayedAttackOutcome {
    OperatorLabel announced;
    /// Data qubit after the ancilla measurement.
    UnitVector2 bob_qubit;
    /// Fidelity of bob_qubit with the announced operator applied to psi.
    double success_weight;
    /// Probability of the ancilla outcome that occurred.
    double branch_probability;
};

/// Delayed-measurement attack on a purified commitment: apply S (x) I, measure
/// the ancilla in the standard basis, announce the `declared`-bit operator
/// indexed by the outcome. Throws AttackError(non_unitary) if S is not unitary.
DelayedAttackOutcome delayed_measurement_attack(const PureState4 &purified, const CoefficientMatrix &S,
                                                CommitBit declared, const UnitVector2 &psi,
                                                const OperatorQuadruple &quadruple, Rng &rng);

/// Normalized per-branch fidelities of (S (x) I)Phi_0(psi) against Phi_1(psi):
/// branch 0 against J|psi>, branch 1 against K|psi>.
std::array<double, 2> branch_fidelities(const CoefficientMatrix &S, const UnitVector2 &psi,
                                        const OperatorQuadruple &quadruple);

/// Coefficients solving J psi = a M psi + b N psi and K psi = c M psi + d N psi.
/// Throws AttackError(not_concealing) when rho_0(psi) != rho_1(psi) or the solution is
/// not unitary, and AttackError(degenerate_input) when M psi and N psi are parallel.
CoefficientMatrix optimal_cheat_unitary(const UnitVector2 &psi, const OperatorQuadruple &quadruple);
/// The raw linear solve behind optimal_cheat_unitary, unitary or not.
CoefficientMatrix solve_cheat_coefficients(const UnitVector2 &psi, const OperatorQuadruple &quadruple);

/// Closest unitary in Frobenius norm (unitary factor of the polar decomposition).
CoefficientMatrix nearest_unitary(const CoefficientMatrix &S);

enum class SynthesisBranch { rank2_linear_solve, rank1_closed_form };
const char *to_string(SynthesisBranch b);

struct AttackSynthesis {
    CoefficientMatrix S;
    SynthesisBranch branch;
    /// ||J - (aM + bN)||_F and ||K - (cM + dN)||_F
    double residual_j;
    double residual_k;
    /// ||S^dagger S - I||_F
    double unitarity;
};

/// psi-independent attack for a concealing quadruple. Uses the linear solve
/// over matrix space when rho_0(|0>) has rank 2 and the diagonal closed form
/// when it has rank 1.
///
/// Throws AttackError(not_concealing) if the concealment check fails and
/// AttackError(proportional_operators) when M, N, J, K are all proportional.
AttackSynthesis synthesize_attack(const OperatorQuadruple &quadruple, double tol = kUnitarityTol);

/// Closed-form coefficients for four diagonal operators diag(j,k), diag(l,m),
/// diag(alpha,beta), diag(gamma,delta).
CoefficientMatrix rank1_coefficients(Complex j, Complex k, Complex l, Complex m, Complex alpha, Complex beta,
                                     Complex gamma, Complex delta);

/// Multiplies each row by the phase that makes its leading nonzero entry real
/// positive, quotienting out left multiplication by diagonal phase matrices.
CoefficientMatrix align_left_phases(const CoefficientMatrix &S);
/// Frobenius distance between the phase-aligned forms.
double aligned_distance(const CoefficientMatrix &x, const CoefficientMatrix &y);

/// Helstrom success probability of guessing chi when Bob chooses the initial state.
double bob_probe_attack(const OperatorQuadruple &quadruple, const UnitVector2 &probe);

/// Average of (Op (x) I)|probe><probe|(Op (x) I)^dagger over the two chi-operators.
Matrix4 bob_entangled_probe(const OperatorQuadruple &quadruple, const PureState4 &probe, CommitBit chi);

/// What the TTP hands Alice and what it will later claim.
struct TamperedRound {
    /// State Alice actually receives, labelled with the basis and outcome it corresponds to.
    PrecommitRecord delivered;
    /// What the TTP reveals at unveil time.
    BasisMeasurement announced_basis;
    int announced_outcome;
    std::vector<std::string> flags;
    StateOrigin origin = StateOrigin::ttp_singlet;
};

/// Applies a TTP strategy to an honestly measured round. wrong_basis(p)
/// replaces the announced basis by a fresh draw from `source` with
/// probability p; biased_state(psi) replaces the collapse by psi and announces
/// the pair (psi, outcome 1) so that honest verification still succeeds.
/// Off-sub-circle fabricated states are permitted and flagged.
TamperedRound ttp_tamper(const TtpStrategy &strategy, const PrecommitRecord &honest, const StateSource &source,
                         Rng &rng);

/// A concealing quadruple together with the coefficient matrix that built it.
struct ConcealingFamily {
    OperatorQuadruple quadruple;
    CoefficientMatrix S;
};

/// M Haar-random, N = -i (n.sigma) M for a random axis n, and S = D O with D
/// diagonal phases and O real orthogonal, so that J = aM + bN, K = cM + dN are unitary.
ConcealingFamily random_concealing_quadruple(Rng &rng);
/// Diagonal (rank-1) concealing quadruple with j conj(k) + l conj(m) = 0 = alpha conj(beta) + gamma conj(delta).
ConcealingFamily random_diagonal_concealing_quadruple(Rng &rng);

}  // namespace nsqbc
