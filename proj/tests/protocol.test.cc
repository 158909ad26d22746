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

#include "nsqbc/protocol.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nsqbc/adversary.h"
#include "nsqbc/analysis.h"
#include "nsqbc/errors.h"
#include "nsqbc/serialize.h"

using namespace nsqbc;

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2;

double three_sigma(double p, double n) {
    return 3 * std::sqrt(p * (1 - p) / n);
}

ProtocolConfig config_with(std::int64_t rounds, std::uint64_t seed,
                           StateSource source = StateSource::subcircle_points(8)) {
    ProtocolConfig c;
    c.rounds = rounds;
    c.seed = seed;
    c.basis_source = source;
    return c;
}

DelayedAlice delayed(CoefficientMatrix S) {
    DelayedAlice a;
    a.S = S;
    return a;
}

}  // namespace

TEST(protocol, precommit_examples) {
    Rng rng(4);
    auto source = StateSource::full_bloch();
    for (int i = 0; i < 500; i++) {
        auto r = precommit_round(source, rng);
        // Alice holds the basis vector the TTP did not find.
        EXPECT_NEAR(fidelity(r.alice_state, r.ttp_basis.result(1 - r.ttp_outcome)), 1, 1e-12);
        EXPECT_NEAR(std::abs(inner(r.ttp_basis.result(r.ttp_outcome), r.alice_state)), 0, 1e-12);
    }
    auto comp = StateSource::subcircle_points(2);
    for (int i = 0; i < 200; i++) {
        auto r = precommit_round(comp, rng);
        if (std::norm(r.ttp_basis.phi().a0()) > 0.5 && r.ttp_outcome == 0) {
            EXPECT_NEAR(fidelity(r.alice_state, ket1()), 1, 1e-12);
        }
    }
}

TEST(protocol, precommit_outcomes_are_balanced) {
    auto records = precommit(config_with(10000, 17));
    int ones = 0;
    for (const auto &r : records) {
        ones += r.ttp_outcome;
        ASSERT_NEAR(std::abs(inner(r.ttp_basis.result(r.ttp_outcome), r.alice_state)), 0, 1e-12);
    }
    EXPECT_NEAR(ones / 1e4, 0.5, three_sigma(0.5, 1e4));
}

TEST(protocol, commit_honest_examples) {
    Rng rng(6);
    auto q = paper_quadruple();
    int m_count = 0;
    for (int i = 0; i < 10000; i++) {
        auto c0 = commit_honest(CommitBit::zero, ket0(), q, rng);
        ASSERT_TRUE(c0.label == OperatorLabel::M || c0.label == OperatorLabel::N);
        if (c0.label == OperatorLabel::M) {
            m_count++;
            EXPECT_NEAR(fidelity(c0.sent_state, ket0()), 1, 1e-12);
        }
        auto c1 = commit_honest(CommitBit::one, ket0(), q, rng);
        ASSERT_TRUE(c1.label == OperatorLabel::J || c1.label == OperatorLabel::K);
        if (c1.label == OperatorLabel::K) {
            EXPECT_NEAR(fidelity(c1.sent_state, ket_minus()), 1, 1e-12);
        }
    }
    EXPECT_NEAR(m_count / 1e4, 0.5, three_sigma(0.5, 1e4));
}

TEST(protocol, commit_purified_examples) {
    auto q = paper_quadruple();
    auto phi0 = commit_purified(CommitBit::zero, ket0(), q);
    PureState4 bell({kInvSqrt2, 0, 0, kInvSqrt2});
    EXPECT_NEAR(fidelity(phi0, bell), 1, 1e-12);

    auto phi1 = commit_purified(CommitBit::one, ket0(), q);
    PureState4::Amplitudes expected{};
    for (int k = 0; k < 2; k++) {
        expected[k] += kInvSqrt2 * (k == 0 ? ket_plus().a0() : ket_plus().a1());
        expected[2 + k] += kInvSqrt2 * (k == 0 ? ket_minus().a0() : ket_minus().a1());
    }
    EXPECT_NEAR(fidelity(phi1, PureState4(expected)), 1, 1e-12);

    Rng rng(2);
    for (int i = 0; i < 50; i++) {
        auto psi = haar_random_state(rng);
        auto rp = rho_pair(q, psi);
        auto r0 = partial_trace(commit_purified(CommitBit::zero, psi, q), Factor::second).matrix();
        auto r1 = partial_trace(commit_purified(CommitBit::one, psi, q), Factor::second).matrix();
        EXPECT_LE((r0 - rp.rho0.matrix()).frobenius_norm(), 1e-12);
        EXPECT_LE((r1 - rp.rho1.matrix()).frobenius_norm(), 1e-12);
    }
}

TEST(protocol, unveil_verify_honest_always_passes) {
    Rng rng(12);
    auto q = paper_quadruple();
    for (int i = 0; i < 2000; i++) {
        BasisMeasurement basis(haar_random_state(rng));
        int outcome = static_cast<int>(rng.uniform_int(2));
        auto psi = basis.result(1 - outcome);
        auto c = commit_honest(i % 2 ? CommitBit::one : CommitBit::zero, psi, q, rng);
        ASSERT_TRUE(unveil_verify(c.sent_state, c.label, basis, outcome, q, rng));
    }
}

TEST(protocol, unveil_verify_wrong_operator_passes_half_the_time) {
    // |<0|J^dagger|0>|^2 = 1/2 for the reference quadruple.
    Rng rng(13);
    auto q = paper_quadruple();
    auto comp = BasisMeasurement::computational();
    EXPECT_NEAR(fidelity(apply(q.J.adjoint(), ket0()), ket0()), 0.5, 1e-15);
    int pass = 0;
    const int n = 10000;
    for (int i = 0; i < n; i++) {
        pass += unveil_verify(apply(q.M, ket0()), OperatorLabel::J, comp, 1, q, rng);
    }
    EXPECT_NEAR(pass / double(n), 0.5, three_sigma(0.5, n));
}

TEST(protocol, unveil_verify_rotated_basis) {
    Rng rng(14);
    auto q = paper_quadruple();
    const double theta = 0.4;
    for (double delta : {0.3, 1.1, 2.0}) {
        auto psi = subcircle_state(theta);
        BasisMeasurement rotated(subcircle_state(theta + delta));
        double expected = std::pow(std::cos(delta / 2), 2);
        int pass = 0;
        const int n = 10000;
        for (int i = 0; i < n; i++) {
            pass += unveil_verify(apply(q.N, psi), OperatorLabel::N, rotated, 1, q, rng);
        }
        EXPECT_NEAR(pass / double(n), expected, three_sigma(expected, n)) << delta;
    }
}

TEST(protocol, unveil_verify_unknown_label_aborts) {
    Rng rng(1);
    auto q = paper_quadruple();
    EXPECT_THROW(unveil_verify(ket0(), "X", BasisMeasurement::computational(), 1, q, rng), ProtocolAbort);
    EXPECT_TRUE(unveil_verify(ket0(), "M", BasisMeasurement::computational(), 1, q, rng));
}

TEST(protocol, honest_completeness) {
    std::vector<StateSource> sources{StateSource::full_bloch(), StateSource::subcircle(),
                                     StateSource::subcircle_points(8), StateSource::subcircle_points(3)};
    for (const auto &source : sources) {
        for (auto chi : {CommitBit::zero, CommitBit::one}) {
            for (std::uint64_t seed : {0, 1, 99}) {
                for (std::int64_t n : {1, 7, 100}) {
                    auto t = run_protocol(config_with(n, seed, source), chi, HonestAlice{}, HonestTtp{}, HonestBob{});
                    ASSERT_EQ(t.verdict.kind, Verdict::Kind::accept);
                    auto s = summarize(t);
                    EXPECT_EQ(s.verified_rounds, n);
                    EXPECT_EQ(s.pass_rate, 1.0);
                }
            }
        }
    }
}

TEST(protocol, phases_are_ordered_and_announcements_wait) {
    std::vector<Phase> seen;
    auto observer = [&](Phase p, const Transcript &t) {
        seen.push_back(p);
        for (const auto &r : t.rounds) {
            EXPECT_FALSE(r.announced_operator.has_value());
            EXPECT_FALSE(r.announced_basis.has_value());
            EXPECT_FALSE(r.announced_outcome.has_value());
            EXPECT_FALSE(r.verified.has_value());
        }
    };
    auto t = run_protocol(config_with(20, 3), CommitBit::one, HonestAlice{}, HonestTtp{}, HonestBob{}, observer);
    std::vector<Phase> expected{Phase::pre_commitment, Phase::commitment, Phase::holding, Phase::unveiling};
    EXPECT_EQ(seen, expected);
    EXPECT_EQ(t.phase_log, expected);
    for (const auto &r : t.rounds) {
        EXPECT_TRUE(r.announced_operator && r.announced_basis && r.announced_outcome && r.verified);
    }
}

TEST(protocol, deterministic_transcripts) {
    auto run = [](std::uint64_t seed) {
        auto t = run_protocol(config_with(50, seed, StateSource::full_bloch()), CommitBit::zero,
                              delayed(CoefficientMatrix::hadamard()), WrongBasisTtp{0.2}, HonestBob{});
        return to_json(t).dump();
    };
    EXPECT_EQ(run(8), run(8));
    EXPECT_NE(run(8), run(9));
}

TEST(protocol, ensemble_of_sent_states_is_maximally_mixed) {
    auto q = paper_quadruple();
    auto mixed = Density2::maximally_mixed().matrix();
    for (int j = 0; j < 8; j++) {
        auto rp = rho_pair(q, subcircle_state(2 * std::numbers::pi * j / 8));
        EXPECT_LE((rp.rho0.matrix() - mixed).frobenius_norm(), 1e-12);
        EXPECT_LE((rp.rho1.matrix() - mixed).frobenius_norm(), 1e-12);
    }
}

TEST(protocol, announcing_other_bit_without_attack) {
    // Identity S keeps the true branch and relabels it with the other bit's operator.
    auto q = paper_quadruple();
    double p = 0;
    for (int j = 0; j < 8; j++) {
        auto psi = subcircle_state(2 * std::numbers::pi * j / 8);
        p += fidelity(apply(q.J.adjoint() * q.M, psi), psi) / 2;
        p += fidelity(apply(q.K.adjoint() * q.N, psi), psi) / 2;
    }
    p /= 8;
    auto long_run = run_protocol(config_with(10000, 5), CommitBit::zero, delayed(CoefficientMatrix::identity()),
                                 HonestTtp{}, HonestBob{});
    EXPECT_NEAR(summarize(long_run).pass_rate, p, three_sigma(p, 1e4));

    int accepted = 0;
    for (std::uint64_t seed = 0; seed < 200; seed++) {
        auto t = run_protocol(config_with(20, seed), CommitBit::zero, delayed(CoefficientMatrix::identity()),
                              HonestTtp{}, HonestBob{});
        accepted += t.verdict.kind == Verdict::Kind::accept;
    }
    EXPECT_LT(accepted / 200.0, 0.05);
}

TEST(protocol, delayed_hadamard_full_bloch_rate) {
    auto t = run_protocol(config_with(10000, 21, StateSource::full_bloch()), CommitBit::zero,
                          delayed(CoefficientMatrix::hadamard()), HonestTtp{}, HonestBob{});
    EXPECT_EQ(t.committed_bit, CommitBit::zero);
    for (const auto &r : t.rounds) {
        ASSERT_TRUE(r.announced_operator == OperatorLabel::J || r.announced_operator == OperatorLabel::K);
    }
    EXPECT_NEAR(summarize(t).pass_rate, 2.0 / 3.0, three_sigma(2.0 / 3.0, 1e4));
}

static double reverse_hadamard_oracle() {
    // 1 -> 0 with S^dagger = H: sum_k |<T_k psi | (1/sqrt2) sum_l H_kl P_l psi>|^2 with P = (J, K), T = (M, N).
    const Complex i1{0, 1};
    const Complex J[2][2] = {{kInvSqrt2, i1 * kInvSqrt2}, {kInvSqrt2, -i1 * kInvSqrt2}};
    const Complex K[2][2] = {{kInvSqrt2, i1 * kInvSqrt2}, {-kInvSqrt2, i1 * kInvSqrt2}};
    const Complex N[2][2] = {{0, -1}, {1, 0}};
    const double H[2][2] = {{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
    auto mul = [](const Complex (&m)[2][2], const Complex (&v)[2], Complex (&out)[2]) {
        out[0] = m[0][0] * v[0] + m[0][1] * v[1];
        out[1] = m[1][0] * v[0] + m[1][1] * v[1];
    };
    // Midpoint rule in cos(theta) times a uniform phase grid.
    const int nt = 64;
    const int np = 64;
    double total = 0;
    for (int a = 0; a < nt; a++) {
        double z = -1 + (2.0 * a + 1) / nt;
        for (int b = 0; b < np; b++) {
            double phase = 2 * std::numbers::pi * b / np;
            Complex psi[2] = {std::sqrt((1 + z) / 2), std::polar(std::sqrt((1 - z) / 2), phase)};
            Complex jp[2], kp[2], np_[2];
            mul(J, psi, jp);
            mul(K, psi, kp);
            mul(N, psi, np_);
            double s = 0;
            for (int k = 0; k < 2; k++) {
                Complex br0 = (H[k][0] * jp[0] + H[k][1] * kp[0]) * kInvSqrt2;
                Complex br1 = (H[k][0] * jp[1] + H[k][1] * kp[1]) * kInvSqrt2;
                const Complex *t = k == 0 ? psi : np_;
                s += std::norm(std::conj(t[0]) * br0 + std::conj(t[1]) * br1);
            }
            total += s;
        }
    }
    return total / (nt * np);
}

TEST(protocol, reverse_direction_cheat) {
    DelayedAlice a = delayed(CoefficientMatrix::hadamard());
    a.declared = CommitBit::zero;
    a.actual = CommitBit::one;
    auto t = run_protocol(config_with(10000, 22, StateSource::full_bloch()), CommitBit::one, a, HonestTtp{},
                          HonestBob{});
    EXPECT_EQ(t.committed_bit, CommitBit::one);
    for (const auto &r : t.rounds) {
        ASSERT_TRUE(r.announced_operator == OperatorLabel::M || r.announced_operator == OperatorLabel::N);
    }
    double expected = reverse_hadamard_oracle();
    EXPECT_NEAR(summarize(t).pass_rate, expected, three_sigma(expected, 1e4));
}

TEST(protocol, synthesized_attack_is_undetectable_in_both_directions) {
    Rng rng(23);
    for (int f = 0; f < 5; f++) {
        auto family = random_concealing_quadruple(rng);
        auto cfg = config_with(300, 100 + f, StateSource::full_bloch());
        cfg.quadruple = family.quadruple;
        auto forward = run_protocol(cfg, CommitBit::zero, delayed(family.S), HonestTtp{}, HonestBob{});
        EXPECT_EQ(forward.verdict.kind, Verdict::Kind::accept);
        DelayedAlice back = delayed(family.S);
        back.declared = CommitBit::zero;
        back.actual = CommitBit::one;
        auto reverse = run_protocol(cfg, CommitBit::one, back, HonestTtp{}, HonestBob{});
        EXPECT_EQ(reverse.verdict.kind, Verdict::Kind::accept);
    }
}

TEST(protocol, per_state_optimal_alice_always_passes_on_subcircle) {
    auto t = run_protocol(config_with(500, 30, StateSource::subcircle()), CommitBit::zero, PerStateOptimalAlice{},
                          HonestTtp{}, HonestBob{});
    EXPECT_EQ(t.verdict.kind, Verdict::Kind::accept);
}

TEST(protocol, wrong_basis_ttp) {
    auto honest = run_protocol(config_with(300, 40), CommitBit::zero, HonestAlice{}, HonestTtp{}, HonestBob{});
    auto zero = run_protocol(config_with(300, 40), CommitBit::zero, HonestAlice{}, WrongBasisTtp{0}, HonestBob{});
    EXPECT_EQ(to_json(honest)["rounds"].dump(), to_json(zero)["rounds"].dump());
    EXPECT_EQ(to_json(honest)["verdict"].dump(), to_json(zero)["verdict"].dump());

    auto always = run_protocol(config_with(10000, 41), CommitBit::zero, HonestAlice{}, WrongBasisTtp{1}, HonestBob{});
    EXPECT_NEAR(summarize(always).pass_rate, 0.5, three_sigma(0.5, 1e4));
    EXPECT_EQ(always.rounds[0].flags, std::vector<std::string>{"ttp_wrong_basis"});
}

TEST(protocol, probe_bob_learns_the_bit) {
    auto t = run_protocol(config_with(10000, 50), CommitBit::one, HonestAlice{}, HonestTtp{}, ProbeBob{ket_plus_i()});
    auto s = summarize(t);
    ASSERT_TRUE(s.bob_guess_accuracy.has_value());
    double p = (1 + kInvSqrt2) / 2;
    EXPECT_NEAR(*s.bob_guess_accuracy, p, three_sigma(p, 1e4));

    auto blind = run_protocol(config_with(10000, 51), CommitBit::one, HonestAlice{}, HonestTtp{}, ProbeBob{ket0()});
    EXPECT_NEAR(*summarize(blind).bob_guess_accuracy, 0.5, three_sigma(0.5, 1e4));
    EXPECT_EQ(blind.verdict.kind, Verdict::Kind::accept);
}

TEST(protocol, entangled_probe_bob) {
    auto t = run_protocol(config_with(200, 52), CommitBit::zero, HonestAlice{}, HonestTtp{}, EntangledProbeBob{});
    EXPECT_NE(t.verdict.kind, Verdict::Kind::abort);
    for (const auto &r : t.rounds) {
        EXPECT_TRUE(r.bob_guess.has_value());
        EXPECT_TRUE(r.sent_joint_state.has_value());
    }
}

TEST(protocol, purified_alice_against_probe_bob_aborts) {
    auto t = run_protocol(config_with(5, 1), CommitBit::zero, delayed(CoefficientMatrix::hadamard()), HonestTtp{},
                          ProbeBob{ket0()});
    EXPECT_EQ(t.verdict.kind, Verdict::Kind::abort);
    EXPECT_FALSE(t.verdict.reason.empty());
}

TEST(protocol, config_validation) {
    ProtocolConfig c;
    c.rounds = 0;
    EXPECT_THROW(c.validate(), ValidationError);
    c.rounds = 1;
    c.basis_source = StateSource::subcircle_points(1);
    EXPECT_THROW(c.validate(), ValidationError);
}

TEST(protocol, non_unitary_attack_matrix_aborts) {
    DelayedAlice a;
    a.S = {1, 1, 0, 1};
    auto t = run_protocol(config_with(3, 1), CommitBit::zero, a, HonestTtp{}, HonestBob{});
    EXPECT_EQ(t.verdict.kind, Verdict::Kind::abort);
}
