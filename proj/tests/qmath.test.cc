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

#include "nsqbc/qmath.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nsqbc/errors.h"
#include "nsqbc/rng.h"

using namespace nsqbc;

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2;
const Complex I1{0, 1};

bool same_ray(const Vector2 &x, const Vector2 &y) {
    return std::abs(fidelity(x, y) - 1) <= 1e-12;
}

bool matrix_near(const Matrix2 &x, const Matrix2 &y, double tol = 1e-12) {
    return (x - y).frobenius_norm() <= tol;
}

}  // namespace

TEST(qmath, unit_vector_rejects_unnormalized) {
    EXPECT_THROW(UnitVector2(Complex{1}, Complex{1}), ValidationError);
    EXPECT_NO_THROW(UnitVector2(Complex{kInvSqrt2}, Complex{0, kInvSqrt2}));
    EXPECT_THROW(UnitVector2::normalized({0, 0}), ValidationError);
}

TEST(qmath, orthogonal_completion) {
    UnitVector2 phi(Complex{0.6}, Complex{0, 0.8});
    auto perp = phi.orthogonal();
    EXPECT_NEAR(std::abs(inner(phi, perp)), 0, 1e-15);
    EXPECT_EQ(perp.a0(), -std::conj(phi.a1()));
    EXPECT_EQ(perp.a1(), std::conj(phi.a0()));
}

TEST(qmath, table_one_actions) {
    auto q = paper_quadruple();
    EXPECT_TRUE(same_ray(q.M.matrix() * ket0().vec(), ket0()));
    EXPECT_TRUE(same_ray(q.N.matrix() * ket0().vec(), ket1()));
    EXPECT_TRUE(same_ray(q.J.matrix() * ket0().vec(), ket_plus()));
    EXPECT_TRUE(same_ray(q.K.matrix() * ket0().vec(), ket_minus()));
    Vector2 j1 = q.J.matrix() * ket1().vec();
    Vector2 expected = I1 * ket_minus().vec();
    EXPECT_NEAR(std::abs(j1.a0 - expected.a0) + std::abs(j1.a1 - expected.a1), 0, 1e-15);
}

TEST(qmath, paper_quadruple_matrices) {
    auto q = paper_quadruple();
    EXPECT_TRUE(matrix_near(q.M, Matrix2::identity()));
    EXPECT_TRUE(matrix_near(q.N, Matrix2(0, -1, 1, 0)));
    EXPECT_TRUE(matrix_near(q.J, kInvSqrt2 * Matrix2(1, I1, 1, -I1), 1e-15));
    EXPECT_TRUE(matrix_near(q.K, kInvSqrt2 * Matrix2(1, I1, -1, I1), 1e-15));
    for (auto l : {OperatorLabel::M, OperatorLabel::N, OperatorLabel::J, OperatorLabel::K}) {
        EXPECT_LE(q.get(l).matrix().unitarity_residual(), 1e-10);
    }
}

TEST(qmath, fidelity_examples) {
    EXPECT_DOUBLE_EQ(fidelity(ket0(), ket0()), 1);
    EXPECT_DOUBLE_EQ(fidelity(ket0(), ket1()), 0);
    EXPECT_NEAR(fidelity(ket0(), ket_plus()), 0.5, 1e-15);
    // Unnormalized first argument is taken literally.
    EXPECT_NEAR(fidelity(Vector2{2, 0}, ket0()), 4, 1e-15);
}

TEST(qmath, fidelity_symmetric) {
    Rng rng(11);
    for (int i = 0; i < 200; i++) {
        auto a = haar_random_state(rng);
        auto b = haar_random_state(rng);
        EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-15);
    }
}

TEST(qmath, trace_distance_examples) {
    auto mixed = Density2::maximally_mixed();
    EXPECT_NEAR(trace_distance(mixed, mixed), 0, 1e-15);
    auto rho = Density2::pure(ket_plus_i());
    EXPECT_NEAR(trace_distance(rho, rho), 0, 1e-15);
    EXPECT_NEAR(trace_distance(rho, Density2::pure(ket1())), kInvSqrt2, 1e-12);
    EXPECT_NEAR(trace_distance(Density2::pure(ket0()), Density2::pure(ket1())), 1, 1e-15);
    EXPECT_NEAR(helstrom_probability(rho, Density2::pure(ket1())), (1 + kInvSqrt2) / 2, 1e-12);
}

TEST(qmath, hermitian_eigenvalues_closed_form) {
    auto ev = hermitian_eigenvalues(sigma_y());
    EXPECT_NEAR(ev[0], -1, 1e-15);
    EXPECT_NEAR(ev[1], 1, 1e-15);
    ev = hermitian_eigenvalues(Matrix2(2, Complex{1, 1}, Complex{1, -1}, 3));
    // Trace 5, determinant 4.
    EXPECT_NEAR(ev[0] + ev[1], 5, 1e-14);
    EXPECT_NEAR(ev[0] * ev[1], 4, 1e-14);
}

TEST(qmath, density_rejects_invalid) {
    EXPECT_THROW(Density2(Matrix2::identity()), ValidationError);
    EXPECT_THROW(Density2(Matrix2(1.5, 0, 0, -0.5)), ValidationError);
    EXPECT_THROW(Density2(Matrix2(0.5, 1, 0, 0.5)), ValidationError);
}

TEST(qmath, partial_trace_examples) {
    auto mixed = Density2::maximally_mixed().matrix();
    EXPECT_TRUE(matrix_near(partial_trace(singlet(), Factor::second).matrix(), mixed));
    EXPECT_TRUE(matrix_near(partial_trace(singlet(), Factor::first).matrix(), mixed));
    auto product = PureState4::product(ket0(), ket_plus());
    EXPECT_TRUE(matrix_near(partial_trace(product, Factor::second).matrix(), Matrix2::outer(ket_plus(), ket_plus())));
    EXPECT_TRUE(matrix_near(partial_trace(product, Factor::first).matrix(), Matrix2::outer(ket0(), ket0())));
}

TEST(qmath, partial_trace_has_unit_trace) {
    Rng rng(5);
    for (int i = 0; i < 200; i++) {
        auto s = random_pure_state4(rng);
        EXPECT_NEAR(std::abs(partial_trace(s, Factor::first).matrix().trace() - 1.0), 0, 1e-12);
        EXPECT_NEAR(std::abs(partial_trace(s, Factor::second).matrix().trace() - 1.0), 0, 1e-12);
    }
}

TEST(qmath, singlet_amplitudes) {
    auto s = singlet();
    EXPECT_EQ(s[0], Complex{0});
    EXPECT_NEAR(std::abs(s[1] - kInvSqrt2), 0, 1e-16);
    EXPECT_NEAR(std::abs(s[2] + kInvSqrt2), 0, 1e-16);
    EXPECT_EQ(s[3], Complex{0});
}

TEST(qmath, singlet_invariant_under_local_unitary_pair) {
    Rng rng(3);
    for (int i = 0; i < 100; i++) {
        auto u = haar_random_unitary(rng);
        auto rotated = singlet().apply_first(u).apply_second(u);
        EXPECT_NEAR(fidelity(rotated, singlet()), 1, 1e-12);
    }
}

TEST(qmath, singlet_anti_correlation_any_basis) {
    Rng rng(9);
    for (int i = 0; i < 50; i++) {
        BasisMeasurement basis(haar_random_state(rng));
        for (int outcome = 0; outcome < 2; outcome++) {
            auto branch = project_first(singlet(), basis, outcome);
            EXPECT_NEAR(branch.probability, 0.5, 1e-12);
            ASSERT_TRUE(branch.collapsed.has_value());
            // The second factor is left exactly in the other basis vector.
            EXPECT_NEAR(fidelity(*branch.collapsed, basis.result(1 - outcome)), 1, 1e-12);
        }
    }
}

TEST(qmath, measure_first_examples) {
    Rng rng(21);
    auto comp = BasisMeasurement::computational();
    int zeros = 0;
    const int n = 10000;
    for (int i = 0; i < n; i++) {
        auto m = measure_first(singlet(), comp, rng);
        EXPECT_TRUE(same_ray(m.collapsed, m.outcome == 0 ? ket1() : ket0()));
        zeros += m.outcome == 0;
    }
    EXPECT_NEAR(zeros / double(n), 0.5, 3 * std::sqrt(0.25 / n));

    auto product = PureState4::product(ket0(), ket_plus());
    for (int i = 0; i < 100; i++) {
        auto m = measure_first(product, comp, rng);
        EXPECT_EQ(m.outcome, 0);
        EXPECT_TRUE(same_ray(m.collapsed, ket_plus()));
    }
}

TEST(qmath, measure_qubit_examples) {
    Rng rng(8);
    auto comp = BasisMeasurement::computational();
    int zeros = 0;
    const int n = 10000;
    for (int i = 0; i < n; i++) {
        EXPECT_EQ(measure_qubit(ket0(), comp, rng), 0);
        zeros += measure_qubit(ket_plus(), comp, rng) == 0;
    }
    EXPECT_NEAR(zeros / double(n), 0.5, 3 * std::sqrt(0.25 / n));
    BasisMeasurement phi(UnitVector2(Complex{0.6}, Complex{0, 0.8}));
    for (int i = 0; i < 100; i++) {
        EXPECT_EQ(measure_qubit(phi.phi().orthogonal(), phi, rng), 1);
    }
}

TEST(qmath, haar_random_state_moments) {
    Rng rng(1234);
    const int n = 100000;
    double sz = 0;
    double sz2 = 0;
    double p0 = 0;
    double p02 = 0;
    for (int i = 0; i < n; i++) {
        auto s = haar_random_state(rng);
        ASSERT_NEAR(s.vec().norm_sq(), 1, 1e-12);
        double z = std::norm(s.a0()) - std::norm(s.a1());
        sz += z;
        sz2 += z * z;
        p0 += std::norm(s.a0());
        p02 += std::norm(s.a0()) * std::norm(s.a0());
    }
    double mean_z = sz / n;
    double se_z = std::sqrt((sz2 / n - mean_z * mean_z) / n);
    EXPECT_NEAR(mean_z, 0, 3 * se_z);
    double mean_p = p0 / n;
    double se_p = std::sqrt((p02 / n - mean_p * mean_p) / n);
    EXPECT_NEAR(mean_p, 0.5, 3 * se_p);
}

TEST(qmath, subcircle_examples) {
    EXPECT_TRUE(same_ray(subcircle_state(0), ket0()));
    EXPECT_TRUE(same_ray(subcircle_state(std::numbers::pi / 2), ket_plus()));
    EXPECT_TRUE(same_ray(subcircle_state(std::numbers::pi), ket1()));
    for (int j = 0; j < 64; j++) {
        auto s = subcircle_state(2 * std::numbers::pi * j / 64);
        EXPECT_NEAR(s.vec().norm_sq(), 1, 1e-12);
        EXPECT_TRUE(on_subcircle(s));
    }
    EXPECT_FALSE(on_subcircle(ket_plus_i()));
}

TEST(qmath, unitarity_and_norm_preserved) {
    Rng rng(77);
    Unitary2 acc = Unitary2::identity();
    for (int i = 0; i < 1000; i++) {
        acc = acc * haar_random_unitary(rng);
        ASSERT_LE(acc.matrix().unitarity_residual(), 1e-10);
    }
    for (int i = 0; i < 200; i++) {
        auto psi = apply(haar_random_unitary(rng), haar_random_state(rng));
        EXPECT_NEAR(psi.vec().norm(), 1, 1e-12);
    }
    EXPECT_THROW(Unitary2(Matrix2(1, 1, 0, 1)), ValidationError);
}

TEST(qmath, operator_labels_and_bits) {
    for (auto l : {OperatorLabel::M, OperatorLabel::N, OperatorLabel::J, OperatorLabel::K}) {
        EXPECT_EQ(parse_operator_label(to_string(l)), l);
    }
    EXPECT_FALSE(parse_operator_label("X").has_value());
    EXPECT_EQ(operators_for(CommitBit::zero), std::make_pair(OperatorLabel::M, OperatorLabel::N));
    EXPECT_EQ(operators_for(CommitBit::one), std::make_pair(OperatorLabel::J, OperatorLabel::K));
    EXPECT_EQ(bit_of(OperatorLabel::N), CommitBit::zero);
    EXPECT_EQ(bit_of(OperatorLabel::K), CommitBit::one);
    EXPECT_THROW(commit_bit_from_int(2), ValidationError);
}

TEST(qmath, four_by_four_trace_distance) {
    auto a = Matrix4::outer(singlet(), singlet());
    auto b = Matrix4::outer(PureState4::product(ket0(), ket0()), PureState4::product(ket0(), ket0()));
    EXPECT_NEAR(trace_distance(a, a), 0, 1e-12);
    EXPECT_NEAR(trace_distance(a, b), 1, 1e-12);
    auto mixed = Matrix4::kron(Density2::maximally_mixed().matrix(), Density2::maximally_mixed().matrix());
    // Pure singlet against I/4: eigenvalues of the difference are 3/4 and -1/4 (x3).
    EXPECT_NEAR(trace_distance(a, mixed), 0.75, 1e-12);
}

TEST(qmath, rng_substreams_are_reproducible) {
    auto x = Rng::substream(5, StreamDomain::protocol_round, 3);
    auto y = Rng::substream(5, StreamDomain::protocol_round, 3);
    auto z = Rng::substream(5, StreamDomain::protocol_round, 4);
    auto w = Rng::substream(5, StreamDomain::mc_block, 3);
    auto first = x.next_u64();
    EXPECT_EQ(first, y.next_u64());
    EXPECT_NE(first, z.next_u64());
    EXPECT_NE(first, w.next_u64());
    Rng r(1);
    for (int i = 0; i < 1000; i++) {
        double u = r.uniform();
        ASSERT_GE(u, 0);
        ASSERT_LT(u, 1);
    }
}
