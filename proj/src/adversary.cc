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

#include <cmath>
#include <numbers>

#include "nsqbc/analysis.h"
#include "nsqbc/errors.h"

namespace nsqbc {

namespace {

constexpr double kSingularDet = 1e-12;

Unitary2 as_attack_unitary(const CoefficientMatrix &S) {
    double res = S.unitarity_residual();
    if (res > kUnitarityTol) {
        throw AttackError(AttackErrorKind::non_unitary,
                          "coefficient matrix is not unitary (residual " + std::to_string(res) + ")");
    }
    return Unitary2(S.matrix());
}

/// ||x - (<y, x>/<y, y>) y||_F
double proportionality_residual(const Matrix2 &x, const Matrix2 &y) {
    Complex c = frobenius_inner(y, x) / frobenius_inner(y, y);
    return (x - c * y).frobenius_norm();
}

double off_diagonal(const Matrix2 &m) {
    return std::hypot(std::abs(m(0, 1)), std::abs(m(1, 0)));
}

Complex random_phase(Rng &rng) {
    return std::polar(1.0, rng.uniform(0, 2 * std::numbers::pi));
}

}  // namespace

DelayedAttackOutcome delayed_measurement_attack(const PureState4 &purified, const CoefficientMatrix &S,
                                                CommitBit declared, const UnitVector2 &psi,
                                                const OperatorQuadruple &quadruple, Rng &rng) {
    PureState4 steered = purified.apply_first(as_attack_unitary(S));
    auto m = measure_first(steered, BasisMeasurement::computational(), rng);
    auto labels = operators_for(declared);
    OperatorLabel announced = m.outcome == 0 ? labels.first : labels.second;
    UnitVector2 honest = apply(quadruple.get(announced), psi);
    return {announced, m.collapsed, fidelity(m.collapsed, honest), m.probability};
}

std::array<double, 2> branch_fidelities(const CoefficientMatrix &S, const UnitVector2 &psi,
                                        const OperatorQuadruple &quadruple) {
    Vector2 mpsi = quadruple.M.matrix() * psi.vec();
    Vector2 npsi = quadruple.N.matrix() * psi.vec();
    Vector2 branch0 = S.a * mpsi + S.b * npsi;
    Vector2 branch1 = S.c * mpsi + S.d * npsi;
    auto normalized_fidelity = [](const Vector2 &branch, const Vector2 &target) {
        double n = branch.norm_sq();
        return n < kDegenerateBranch ? 0.0 : fidelity(branch, target) / n;
    };
    return {normalized_fidelity(branch0, quadruple.J.matrix() * psi.vec()),
            normalized_fidelity(branch1, quadruple.K.matrix() * psi.vec())};
}

CoefficientMatrix solve_cheat_coefficients(const UnitVector2 &psi, const OperatorQuadruple &quadruple) {
    Vector2 u = quadruple.M.matrix() * psi.vec();
    Vector2 w = quadruple.N.matrix() * psi.vec();
    Complex det = u.a0 * w.a1 - w.a0 * u.a1;
    if (std::abs(det) < kSingularDet) {
        throw AttackError(AttackErrorKind::degenerate_input, "M|psi> and N|psi> are parallel");
    }
    auto solve = [&](const Vector2 &y) -> std::pair<Complex, Complex> {
        return {(w.a1 * y.a0 - w.a0 * y.a1) / det, (u.a0 * y.a1 - u.a1 * y.a0) / det};
    };
    auto [a, b] = solve(quadruple.J.matrix() * psi.vec());
    auto [c, d] = solve(quadruple.K.matrix() * psi.vec());
    return {a, b, c, d};
}

CoefficientMatrix optimal_cheat_unitary(const UnitVector2 &psi, const OperatorQuadruple &quadruple) {
    // A unitary exists only when the reduced states agree, degenerate or not.
    double distance = rho_pair(quadruple, psi).distance;
    if (distance > kNormTol) {
        throw AttackError(AttackErrorKind::not_concealing,
                          "rho_0(psi) and rho_1(psi) differ (trace distance " + std::to_string(distance) + ")");
    }
    CoefficientMatrix S = solve_cheat_coefficients(psi, quadruple);
    double res = S.unitarity_residual();
    if (res > kUnitarityTol) {
        throw AttackError(AttackErrorKind::not_concealing,
                          "no unitary maps Phi_0(psi) to Phi_1(psi) (residual " + std::to_string(res) + ")");
    }
    return S;
}

CoefficientMatrix nearest_unitary(const CoefficientMatrix &S) {
    Matrix2 a = S.matrix();
    if (std::abs(a.det()) < kSingularDet) {
        throw AttackError(AttackErrorKind::degenerate_input, "singular matrix has no unique polar factor");
    }
    // sqrt(P) = (P + sqrt(det P) I) / sqrt(tr P + 2 sqrt(det P)) for positive definite 2x2 P.
    Matrix2 p = a.adjoint() * a;
    double root_det = std::sqrt(std::max(p.det().real(), 0.0));
    double scale = std::sqrt(p.trace().real() + 2 * root_det);
    Matrix2 root = (1 / scale) * (p + Complex(root_det) * Matrix2::identity());
    Complex inv_det = 1.0 / root.det();
    Matrix2 root_inv = inv_det * Matrix2(root(1, 1), -root(0, 1), -root(1, 0), root(0, 0));
    return CoefficientMatrix::from(a * root_inv);
}

const char *to_string(SynthesisBranch b) {
    return b == SynthesisBranch::rank1_closed_form ? "rank1_closed_form" : "rank2_linear_solve";
}

CoefficientMatrix rank1_coefficients(Complex j, Complex k, Complex l, Complex m, Complex alpha, Complex beta,
                                     Complex gamma, Complex delta) {
    Complex den = l * k - m * j;
    if (std::abs(den) < kSingularDet) {
        throw AttackError(AttackErrorKind::proportional_operators, "lk - mj vanishes (M and N proportional)");
    }
    return {(l * beta - m * alpha) / den, (k * alpha - j * beta) / den, (l * delta - m * gamma) / den,
            (k * gamma - j * delta) / den};
}

AttackSynthesis synthesize_attack(const OperatorQuadruple &q, double tol) {
    ConcealmentReport report = concealment_check(q, tol);
    if (!report.passes) {
        throw AttackError(AttackErrorKind::not_concealing, "quadruple fails the concealment conditions");
    }
    const Matrix2 &M = q.M.matrix();
    const Matrix2 &N = q.N.matrix();
    const Matrix2 &J = q.J.matrix();
    const Matrix2 &K = q.K.matrix();
    if (proportionality_residual(N, M) <= tol && proportionality_residual(J, M) <= tol &&
        proportionality_residual(K, M) <= tol) {
        throw AttackError(AttackErrorKind::proportional_operators, "M, N, J and K are all proportional");
    }

    // rho_0(|0>) has eigenvalues (1 +- |<M0|N0>|)/2.
    double overlap = std::abs(inner(M * Vector2{1, 0}, N * Vector2{1, 0}));
    AttackSynthesis out{};
    if ((1 - overlap) / 2 <= tol) {
        Matrix2 lift = M.adjoint();
        Matrix2 n = lift * N;
        Matrix2 j = lift * J;
        Matrix2 k = lift * K;
        if (off_diagonal(n) > tol || off_diagonal(j) > tol || off_diagonal(k) > tol) {
            throw AttackError(AttackErrorKind::not_concealing, "rank-1 case without a common diagonal frame");
        }
        Matrix2 m = lift * M;
        out.S = rank1_coefficients(m(0, 0), m(1, 1), n(0, 0), n(1, 1), j(0, 0), j(1, 1), k(0, 0), k(1, 1));
        out.branch = SynthesisBranch::rank1_closed_form;
    } else {
        // Normal equations of J = aM + bN over the Frobenius inner product.
        Complex g00 = frobenius_inner(M, M);
        Complex g01 = frobenius_inner(M, N);
        Complex g10 = frobenius_inner(N, M);
        Complex g11 = frobenius_inner(N, N);
        Complex det = g00 * g11 - g01 * g10;
        if (std::abs(det) < kSingularDet) {
            throw AttackError(AttackErrorKind::not_concealing, "M and N are proportional");
        }
        auto solve = [&](const Matrix2 &target) -> std::pair<Complex, Complex> {
            Complex r0 = frobenius_inner(M, target);
            Complex r1 = frobenius_inner(N, target);
            return {(g11 * r0 - g01 * r1) / det, (g00 * r1 - g10 * r0) / det};
        };
        auto [a, b] = solve(J);
        auto [c, d] = solve(K);
        out.S = {a, b, c, d};
        out.branch = SynthesisBranch::rank2_linear_solve;
    }
    out.residual_j = (J - (out.S.a * M + out.S.b * N)).frobenius_norm();
    out.residual_k = (K - (out.S.c * M + out.S.d * N)).frobenius_norm();
    out.unitarity = out.S.unitarity_residual();
    if (out.residual_j > tol || out.residual_k > tol || out.unitarity > tol) {
        throw AttackError(AttackErrorKind::not_concealing, "J, K are not a unitary recombination of M, N");
    }
    return out;
}

CoefficientMatrix align_left_phases(const CoefficientMatrix &S) {
    auto align = [](Complex &x, Complex &y) {
        Complex lead = std::abs(x) > 1e-9 ? x : y;
        if (std::abs(lead) == 0) {
            return;
        }
        Complex phase = std::conj(lead) / std::abs(lead);
        x *= phase;
        y *= phase;
    };
    CoefficientMatrix out = S;
    align(out.a, out.b);
    align(out.c, out.d);
    return out;
}

double aligned_distance(const CoefficientMatrix &x, const CoefficientMatrix &y) {
    return (align_left_phases(x).matrix() - align_left_phases(y).matrix()).frobenius_norm();
}

double bob_probe_attack(const OperatorQuadruple &quadruple, const UnitVector2 &probe) {
    RhoPair rp = rho_pair(quadruple, probe);
    return helstrom_probability(rp.rho0, rp.rho1);
}

Matrix4 bob_entangled_probe(const OperatorQuadruple &quadruple, const PureState4 &probe, CommitBit chi) {
    auto [first, second] = operators_for(chi);
    PureState4 s1 = probe.apply_first(quadruple.get(first));
    PureState4 s2 = probe.apply_first(quadruple.get(second));
    return Complex(0.5) * (Matrix4::outer(s1, s1) + Matrix4::outer(s2, s2));
}

TamperedRound ttp_tamper(const TtpStrategy &strategy, const PrecommitRecord &honest, const StateSource &source,
                         Rng &rng) {
    TamperedRound out{honest, honest.ttp_basis, honest.ttp_outcome, {}, StateOrigin::ttp_singlet};
    if (const auto *w = std::get_if<WrongBasisTtp>(&strategy)) {
        if (w->p > 0 && rng.bernoulli(w->p)) {
            out.announced_basis = BasisMeasurement(source.sample(rng));
            out.flags.emplace_back("ttp_wrong_basis");
        }
    } else if (const auto *b = std::get_if<BiasedStateTtp>(&strategy)) {
        BasisMeasurement claimed(b->psi);
        out.delivered = {claimed, 1, b->psi};
        out.announced_basis = claimed;
        out.announced_outcome = 1;
        out.origin = StateOrigin::ttp_fabricated;
        out.flags.emplace_back("ttp_fabricated_state");
        if (!on_subcircle(b->psi)) {
            out.flags.emplace_back("off_subcircle_state");
        }
    }
    return out;
}

ConcealingFamily random_concealing_quadruple(Rng &rng) {
    Unitary2 M = haar_random_unitary(rng);
    double nx = rng.normal();
    double ny = rng.normal();
    double nz = rng.normal();
    double len = std::sqrt(nx * nx + ny * ny + nz * nz);
    Matrix2 axis = Complex(nx / len) * sigma_x() + Complex(ny / len) * sigma_y() + Complex(nz / len) * sigma_z();
    Unitary2 N(Complex(0, -1) * axis * M.matrix());

    double theta = rng.uniform(0, 2 * std::numbers::pi);
    double c = std::cos(theta);
    double s = std::sin(theta);
    Matrix2 orth = rng.bernoulli(0.5) ? Matrix2(c, s, -s, c) : Matrix2(c, s, s, -c);
    Matrix2 phases(random_phase(rng), 0, 0, random_phase(rng));
    CoefficientMatrix S = CoefficientMatrix::from(phases * orth);

    Unitary2 J(S.a * M.matrix() + S.b * N.matrix());
    Unitary2 K(S.c * M.matrix() + S.d * N.matrix());
    return {{M, N, J, K}, S};
}

ConcealingFamily random_diagonal_concealing_quadruple(Rng &rng) {
    Complex j = random_phase(rng);
    Complex k = random_phase(rng);
    Complex l = random_phase(rng);
    Complex m = -std::conj(j) * k * l;
    Complex alpha = random_phase(rng);
    Complex beta = random_phase(rng);
    Complex gamma = random_phase(rng);
    Complex delta = -std::conj(alpha) * beta * gamma;
    OperatorQuadruple q{Unitary2(Matrix2(j, 0, 0, k)), Unitary2(Matrix2(l, 0, 0, m)),
                        Unitary2(Matrix2(alpha, 0, 0, beta)), Unitary2(Matrix2(gamma, 0, 0, delta))};
    return {q, rank1_coefficients(j, k, l, m, alpha, beta, gamma, delta)};
}

}  // namespace nsqbc
