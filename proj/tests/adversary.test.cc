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

#include "nsqbc/adversary.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nsqbc/analysis.h"
#include "nsqbc/errors.h"

using namespace nsqbc;

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2;
const Complex I1{0, 1};

CoefficientMatrix from_rows(Complex a, Complex b, Complex c, Complex d) {
    return {a, b, c, d};
}

/// (I, -i sigma_y, (I - i sigma_y)/sqrt2, (I + i sigma_y)/sqrt2): J = (M + N)/sqrt2, K = (M - N)/sqrt2.
OperatorQuadruple hadamard_quadruple() {
    Matrix2 m = Matrix2::identity();
    Matrix2 n = Complex(0, -1) * sigma_y();
    return {Unitary2(m), Unitary2(n), Unitary2(Complex(kInvSqrt2) * (m + n)), Unitary2(Complex(kInvSqrt2) * (m - n))};
}

OperatorQuadruple identity_quadruple() {
    return {Unitary2::identity(), Unitary2::identity(), Unitary2::identity(), Unitary2::identity()};
}

AttackErrorKind attack_error_kind(const std::function<void()> &f) {
    try {
        f();
    } catch (const AttackError &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no AttackError thrown";
    return AttackErrorKind::degenerate_input;
}

}  // namespace

TEST(adversary, branch_fidelities_examples) {
    auto q = paper_quadruple();
    auto h = CoefficientMatrix::hadamard();
    auto at0 = branch_fidelities(h, ket0(), q);
    EXPECT_NEAR(at0[0], 1, 1e-12);
    EXPECT_NEAR(at0[1], 1, 1e-12);
    auto at_plus = branch_fidelities(h, ket_plus(), q);
    EXPECT_LT(std::min(at_plus[0], at_plus[1]), 1 - 1e-3);
    auto s_plus = from_rows(kInvSqrt2, -I1 * kInvSqrt2, I1 * kInvSqrt2, -kInvSqrt2);
    auto fixed = branch_fidelities(s_plus, ket_plus(), q);
    EXPECT_NEAR(fixed[0], 1, 1e-12);
    EXPECT_NEAR(fixed[1], 1, 1e-12);
}

TEST(adversary, delayed_measurement_attack_at_zero) {
    auto q = paper_quadruple();
    Rng rng(1);
    int seen[2] = {0, 0};
    for (int i = 0; i < 200; i++) {
        auto purified = commit_purified(CommitBit::zero, ket0(), q);
        auto out = delayed_measurement_attack(purified, CoefficientMatrix::hadamard(), CommitBit::one, ket0(), q, rng);
        ASSERT_TRUE(out.announced == OperatorLabel::J || out.announced == OperatorLabel::K);
        EXPECT_NEAR(out.success_weight, 1, 1e-12);
        EXPECT_NEAR(out.branch_probability, 0.5, 1e-12);
        seen[out.announced == OperatorLabel::K]++;
    }
    EXPECT_GT(seen[0], 0);
    EXPECT_GT(seen[1], 0);
}

TEST(adversary, delayed_measurement_attack_rejects_non_unitary) {
    auto q = paper_quadruple();
    Rng rng(1);
    auto purified = commit_purified(CommitBit::zero, ket0(), q);
    EXPECT_EQ(attack_error_kind([&] {
                  delayed_measurement_attack(purified, from_rows(1, 1, 0, 1), CommitBit::one, ket0(), q, rng);
              }),
              AttackErrorKind::non_unitary);
}

TEST(adversary, optimal_cheat_unitary_examples) {
    auto q = paper_quadruple();
    auto s0 = optimal_cheat_unitary(ket0(), q);
    EXPECT_LE(aligned_distance(s0, CoefficientMatrix::hadamard()), 1e-10);
    auto s_plus = optimal_cheat_unitary(ket_plus(), q);
    EXPECT_LE(aligned_distance(s_plus, from_rows(kInvSqrt2, -I1 * kInvSqrt2, I1 * kInvSqrt2, -kInvSqrt2)), 1e-10);
    EXPECT_EQ(attack_error_kind([&] { optimal_cheat_unitary(ket_plus_i(), q); }), AttackErrorKind::not_concealing);
}

TEST(adversary, optimal_cheat_unitary_degenerate_input) {
    EXPECT_EQ(attack_error_kind([&] { optimal_cheat_unitary(ket0(), identity_quadruple()); }),
              AttackErrorKind::degenerate_input);
}

TEST(adversary, optimal_cheat_unitary_on_subcircle) {
    auto q = paper_quadruple();
    for (int j = 0; j < 64; j++) {
        auto psi = subcircle_state(2 * std::numbers::pi * j / 64);
        auto S = optimal_cheat_unitary(psi, q);
        EXPECT_LE(S.unitarity_residual(), 1e-10);
        auto f = branch_fidelities(S, psi, q);
        EXPECT_NEAR(f[0], 1, 1e-10);
        EXPECT_NEAR(f[1], 1, 1e-10);
    }
}

TEST(adversary, fixed_attack_is_not_universal) {
    auto q = paper_quadruple();
    auto s0 = optimal_cheat_unitary(ket0(), q);
    auto f = branch_fidelities(s0, ket_plus(), q);
    EXPECT_LT(std::min(f[0], f[1]), 1.0);
}

TEST(adversary, nearest_unitary) {
    auto h = CoefficientMatrix::hadamard();
    EXPECT_LE(aligned_distance(nearest_unitary(h), h), 1e-14);
    auto u = nearest_unitary(from_rows(1, 0.3, Complex(0.1, 0.2), 0.8));
    EXPECT_LE(u.unitarity_residual(), 1e-12);
    // Diagonal positive matrices have the identity as their unitary polar factor.
    auto id = nearest_unitary(from_rows(2, 0, 0, 0.5));
    EXPECT_LE(aligned_distance(id, CoefficientMatrix::identity()), 1e-14);
}

TEST(adversary, align_left_phases) {
    auto h = CoefficientMatrix::hadamard();
    auto rotated = from_rows(I1 * h.a, I1 * h.b, -h.c, -h.d);
    EXPECT_LE(aligned_distance(rotated, h), 1e-15);
    auto aligned = align_left_phases(rotated);
    EXPECT_NEAR(aligned.a.imag(), 0, 1e-15);
    EXPECT_GT(aligned.a.real(), 0);
    EXPECT_GT(aligned_distance(h, from_rows(h.a, -h.b, h.c, h.d)), 0.5);
}

TEST(adversary, synthesize_hadamard_quadruple) {
    auto syn = synthesize_attack(hadamard_quadruple());
    EXPECT_EQ(syn.branch, SynthesisBranch::rank2_linear_solve);
    EXPECT_LE(aligned_distance(syn.S, CoefficientMatrix::hadamard()), 1e-12);
    EXPECT_LE(syn.residual_j, 1e-10);
    EXPECT_LE(syn.residual_k, 1e-10);
    EXPECT_LE(syn.unitarity, 1e-10);
}

TEST(adversary, synthesize_rejects_reference_quadruple) {
    EXPECT_EQ(attack_error_kind([] { synthesize_attack(paper_quadruple()); }), AttackErrorKind::not_concealing);
}

TEST(adversary, synthesize_flags_proportional_operators) {
    EXPECT_EQ(attack_error_kind([] { synthesize_attack(identity_quadruple()); }),
              AttackErrorKind::proportional_operators);
}

TEST(adversary, rank1_closed_form) {
    Table3Params p;
    p.j = 1;
    p.k = 1;
    p.l = 1;
    p.m = -1;
    p.alpha = 1;
    p.beta = I1;
    p.gamma = 1;
    p.delta = -I1;
    auto t3 = table3_quadruple(p);
    ASSERT_TRUE(t3.condition_holds);
    auto syn = synthesize_attack(t3.quadruple);
    EXPECT_EQ(syn.branch, SynthesisBranch::rank1_closed_form);
    auto closed = rank1_coefficients(p.j, p.k, p.l, p.m, p.alpha, p.beta, p.gamma, p.delta);
    EXPECT_LE(aligned_distance(syn.S, closed), 1e-12);
    // Hand evaluation: a = (l beta - m alpha)/(l k - m j) and so on.
    auto expected = from_rows(Complex(0.5, 0.5), Complex(0.5, -0.5), Complex(0.5, -0.5), Complex(0.5, 0.5));
    EXPECT_LE(aligned_distance(closed, expected), 1e-15);
    EXPECT_LE(syn.residual_j, 1e-10);
    EXPECT_LE(syn.residual_k, 1e-10);
}

TEST(adversary, synthesis_round_trip_on_generated_families) {
    Rng rng(2026);
    for (int f = 0; f < 200; f++) {
        auto family = f % 4 == 3 ? random_diagonal_concealing_quadruple(rng) : random_concealing_quadruple(rng);
        ASSERT_TRUE(concealment_check(family.quadruple).passes);
        AttackSynthesis syn = synthesize_attack(family.quadruple);
        EXPECT_LE(aligned_distance(syn.S, family.S), 1e-8) << f;
        EXPECT_LE(syn.residual_j, 1e-10);
        EXPECT_LE(syn.residual_k, 1e-10);
        EXPECT_LE(syn.unitarity, 1e-10);
        for (int i = 0; i < 20; i++) {
            auto psi = haar_random_state(rng);
            auto fid = branch_fidelities(syn.S, psi, family.quadruple);
            ASSERT_GE(fid[0], 1 - 1e-10);
            ASSERT_GE(fid[1], 1 - 1e-10);
        }
    }
}

TEST(adversary, diagonal_families_use_rank1_branch) {
    Rng rng(7);
    for (int f = 0; f < 20; f++) {
        auto family = random_diagonal_concealing_quadruple(rng);
        EXPECT_EQ(synthesize_attack(family.quadruple).branch, SynthesisBranch::rank1_closed_form);
    }
}

TEST(adversary, bob_probe_attack_examples) {
    auto q = paper_quadruple();
    EXPECT_NEAR(bob_probe_attack(q, ket0()), 0.5, 1e-12);
    EXPECT_NEAR(bob_probe_attack(q, ket_plus()), 0.5, 1e-12);
    EXPECT_NEAR(bob_probe_attack(q, ket_plus_i()), (1 + kInvSqrt2) / 2, 1e-12);
}

TEST(adversary, bob_entangled_probe_examples) {
    auto concealed = hadamard_quadruple();
    auto d = trace_distance(bob_entangled_probe(concealed, singlet(), CommitBit::zero),
                            bob_entangled_probe(concealed, singlet(), CommitBit::one));
    EXPECT_LE(d, 1e-12);

    auto q = paper_quadruple();
    EXPECT_GT(trace_distance(bob_entangled_probe(q, singlet(), CommitBit::zero),
                             bob_entangled_probe(q, singlet(), CommitBit::one)),
              0.1);

    auto product = PureState4::product(ket0(), ket0());
    for (auto chi : {CommitBit::zero, CommitBit::one}) {
        auto rp = rho_pair(q, ket0());
        const auto &rho = chi == CommitBit::zero ? rp.rho0 : rp.rho1;
        auto expected = Matrix4::kron(rho.matrix(), Matrix2::outer(ket0(), ket0()));
        EXPECT_LE((bob_entangled_probe(q, product, chi) - expected).frobenius_norm(), 1e-12);
    }
}

TEST(adversary, ttp_tamper) {
    Rng rng(3);
    auto source = StateSource::subcircle_points(8);
    auto honest = precommit_round(source, rng);
    auto same = ttp_tamper(WrongBasisTtp{0}, honest, source, rng);
    EXPECT_TRUE(same.flags.empty());
    EXPECT_EQ(same.announced_outcome, honest.ttp_outcome);
    EXPECT_NEAR(fidelity(same.announced_basis.phi(), honest.ttp_basis.phi()), 1, 1e-15);

    auto always = ttp_tamper(WrongBasisTtp{1}, honest, source, rng);
    EXPECT_EQ(always.flags, std::vector<std::string>{"ttp_wrong_basis"});

    auto biased = ttp_tamper(BiasedStateTtp{ket_plus_i()}, honest, source, rng);
    EXPECT_EQ(biased.origin, StateOrigin::ttp_fabricated);
    EXPECT_NEAR(fidelity(biased.delivered.alice_state, ket_plus_i()), 1, 1e-15);
    EXPECT_EQ(biased.flags, (std::vector<std::string>{"ttp_fabricated_state", "off_subcircle_state"}));
    // The fabricating TTP distinguishes the bit exactly as a probing Bob would.
    EXPECT_NEAR(bob_probe_attack(paper_quadruple(), biased.delivered.alice_state), (1 + kInvSqrt2) / 2, 1e-12);
}
