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

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nsqbc/errors.h"

namespace nsqbc {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr Complex kI{0, 1};

bool finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

std::string fmt_residual(const char *what, double residual, double tol) {
    std::ostringstream ss;
    ss.precision(3);
    ss << what << " (residual " << std::scientific << residual << " > " << tol << ")";
    return ss.str();
}

}  // namespace

double Vector2::norm() const {
    return std::sqrt(norm_sq());
}

UnitVector2::UnitVector2(Complex a0, Complex a1, double tol) : v_{a0, a1} {
    if (!finite(a0) || !finite(a1)) {
        throw ValidationError("state has non-finite amplitude");
    }
    double r = std::abs(v_.norm_sq() - 1);
    if (r > tol) {
        throw ValidationError(fmt_residual("state is not normalized", r, tol));
    }
}

UnitVector2 UnitVector2::normalized(const Vector2 &v) {
    double n = v.norm();
    if (!(n > kDegenerateBranch)) {
        throw ValidationError("cannot normalize a zero vector");
    }
    return UnitVector2(Trusted{}, Vector2{v.a0 / n, v.a1 / n});
}

UnitVector2 UnitVector2::orthogonal() const {
    return UnitVector2(Trusted{}, Vector2{-std::conj(v_.a1), std::conj(v_.a0)});
}

UnitVector2 ket0() {
    return {1, 0};
}
UnitVector2 ket1() {
    return {0, 1};
}
UnitVector2 ket_plus() {
    return {kInvSqrt2, kInvSqrt2};
}
UnitVector2 ket_minus() {
    return {kInvSqrt2, -kInvSqrt2};
}
UnitVector2 ket_plus_i() {
    return {kInvSqrt2, kI * kInvSqrt2};
}
UnitVector2 ket_minus_i() {
    return {kInvSqrt2, -kI * kInvSqrt2};
}

bool on_subcircle(const Vector2 &v, double tol) {
    return std::abs((v.a0 * std::conj(v.a1)).imag()) <= tol;
}

Matrix2 Matrix2::outer(const Vector2 &ket, const Vector2 &bra) {
    return {ket.a0 * std::conj(bra.a0), ket.a0 * std::conj(bra.a1), ket.a1 * std::conj(bra.a0),
            ket.a1 * std::conj(bra.a1)};
}

Matrix2 Matrix2::adjoint() const {
    return {std::conj(e_[0]), std::conj(e_[2]), std::conj(e_[1]), std::conj(e_[3])};
}

double Matrix2::frobenius_norm() const {
    double s = 0;
    for (auto z : e_) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

double Matrix2::unitarity_residual() const {
    return (adjoint() * *this - identity()).frobenius_norm();
}

double Matrix2::hermiticity_residual() const {
    return (*this - adjoint()).frobenius_norm();
}

Matrix2 operator+(const Matrix2 &x, const Matrix2 &y) {
    Matrix2 r;
    for (int i = 0; i < 4; i++) {
        r.e_[i] = x.e_[i] + y.e_[i];
    }
    return r;
}

Matrix2 operator-(const Matrix2 &x, const Matrix2 &y) {
    Matrix2 r;
    for (int i = 0; i < 4; i++) {
        r.e_[i] = x.e_[i] - y.e_[i];
    }
    return r;
}

Matrix2 operator*(const Matrix2 &x, const Matrix2 &y) {
    Matrix2 r;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
        }
    }
    return r;
}

Matrix2 operator*(Complex s, const Matrix2 &x) {
    Matrix2 r;
    for (int i = 0; i < 4; i++) {
        r.e_[i] = s * x.e_[i];
    }
    return r;
}

Complex frobenius_inner(const Matrix2 &x, const Matrix2 &y) {
    Complex s = 0;
    for (int r = 0; r < 2; r++) {
        for (int c = 0; c < 2; c++) {
            s += std::conj(x(r, c)) * y(r, c);
        }
    }
    return s;
}

Matrix2 sigma_x() {
    return {0, 1, 1, 0};
}
Matrix2 sigma_y() {
    return {0, -kI, kI, 0};
}
Matrix2 sigma_z() {
    return {1, 0, 0, -1};
}

std::array<double, 2> hermitian_eigenvalues(const Matrix2 &h) {
    double a = h(0, 0).real();
    double d = h(1, 1).real();
    double mid = (a + d) / 2;
    double half_gap = std::hypot((a - d) / 2, std::abs(h(0, 1)));
    return {mid - half_gap, mid + half_gap};
}

Unitary2::Unitary2(const Matrix2 &m, double tol) : m_(m) {
    for (int r = 0; r < 2; r++) {
        for (int c = 0; c < 2; c++) {
            if (!finite(m(r, c))) {
                throw ValidationError("matrix has non-finite entry");
            }
        }
    }
    double res = m.unitarity_residual();
    if (res > tol) {
        throw ValidationError(fmt_residual("matrix is not unitary", res, tol));
    }
}

Unitary2 Unitary2::adjoint() const {
    return Unitary2(m_.adjoint());
}

UnitVector2 apply(const Unitary2 &u, const UnitVector2 &psi) {
    return UnitVector2(u.matrix() * psi.vec());
}

double fidelity(const Vector2 &psi, const Vector2 &phi) {
    return std::norm(inner(psi, phi));
}

Density2::Density2(const Matrix2 &m, double tol) : m_(m) {
    double herm = m.hermiticity_residual();
    if (herm > tol) {
        throw ValidationError(fmt_residual("density matrix is not Hermitian", herm, tol));
    }
    double tr = std::abs(m.trace() - 1.0);
    if (tr > tol) {
        throw ValidationError(fmt_residual("density matrix trace is not 1", tr, tol));
    }
    double low = hermitian_eigenvalues(m)[0];
    if (low < -tol) {
        throw ValidationError(fmt_residual("density matrix is not positive", -low, tol));
    }
}

Density2 Density2::pure(const UnitVector2 &psi) {
    return Density2(Matrix2::outer(psi, psi));
}

double trace_distance(const Density2 &rho, const Density2 &sigma) {
    auto ev = hermitian_eigenvalues(rho.matrix() - sigma.matrix());
    return (std::abs(ev[0]) + std::abs(ev[1])) / 2;
}

double helstrom_probability(const Density2 &rho, const Density2 &sigma) {
    return (1 + trace_distance(rho, sigma)) / 2;
}

PureState4::PureState4(const Amplitudes &amps, double tol) : amps_(amps) {
    double s = 0;
    for (auto z : amps) {
        if (!finite(z)) {
            throw ValidationError("state has non-finite amplitude");
        }
        s += std::norm(z);
    }
    if (std::abs(s - 1) > tol) {
        throw ValidationError(fmt_residual("two-qubit state is not normalized", std::abs(s - 1), tol));
    }
}

PureState4 PureState4::product(const UnitVector2 &first, const UnitVector2 &second) {
    return PureState4::normalized({first.a0() * second.a0(), first.a0() * second.a1(),
                                   first.a1() * second.a0(), first.a1() * second.a1()});
}

PureState4 PureState4::normalized(const Amplitudes &amps) {
    double s = 0;
    for (auto z : amps) {
        s += std::norm(z);
    }
    double n = std::sqrt(s);
    if (!(n > kDegenerateBranch)) {
        throw ValidationError("cannot normalize a zero two-qubit vector");
    }
    Amplitudes out;
    for (int i = 0; i < 4; i++) {
        out[i] = amps[i] / n;
    }
    return PureState4(out);
}

PureState4 PureState4::apply_first(const Unitary2 &u) const {
    Amplitudes out;
    for (int j = 0; j < 2; j++) {
        out[j] = u(0, 0) * amps_[j] + u(0, 1) * amps_[2 + j];
        out[2 + j] = u(1, 0) * amps_[j] + u(1, 1) * amps_[2 + j];
    }
    return PureState4(out);
}

PureState4 PureState4::apply_second(const Unitary2 &u) const {
    Amplitudes out;
    for (int i = 0; i < 2; i++) {
        out[2 * i] = u(0, 0) * amps_[2 * i] + u(0, 1) * amps_[2 * i + 1];
        out[2 * i + 1] = u(1, 0) * amps_[2 * i] + u(1, 1) * amps_[2 * i + 1];
    }
    return PureState4(out);
}

Vector2 PureState4::contract_first(const Vector2 &phi) const {
    Complex c0 = std::conj(phi.a0);
    Complex c1 = std::conj(phi.a1);
    return {c0 * amps_[0] + c1 * amps_[2], c0 * amps_[1] + c1 * amps_[3]};
}

Complex inner(const PureState4 &x, const PureState4 &y) {
    Complex s = 0;
    for (int i = 0; i < 4; i++) {
        s += std::conj(x[i]) * y[i];
    }
    return s;
}

double fidelity(const PureState4 &x, const PureState4 &y) {
    return std::norm(inner(x, y));
}

PureState4 singlet() {
    return PureState4({0, kInvSqrt2, -kInvSqrt2, 0});
}

Density2 partial_trace(const PureState4 &s, Factor keep) {
    Matrix2 r;
    for (int a = 0; a < 2; a++) {
        for (int b = 0; b < 2; b++) {
            Complex acc = 0;
            for (int k = 0; k < 2; k++) {
                if (keep == Factor::second) {
                    acc += s[2 * k + a] * std::conj(s[2 * k + b]);
                } else {
                    acc += s[2 * a + k] * std::conj(s[2 * b + k]);
                }
            }
            r(a, b) = acc;
        }
    }
    return Density2(r);
}

UnitVector2 BasisMeasurement::result(int outcome) const {
    return outcome == 0 ? phi_ : phi_.orthogonal();
}

FirstFactorBranch project_first(const PureState4 &state, const BasisMeasurement &basis, int outcome) {
    Vector2 v = state.contract_first(basis.result(outcome));
    double p = v.norm_sq();
    if (p < kDegenerateBranch) {
        return {p, std::nullopt};
    }
    return {p, UnitVector2::normalized(v)};
}

FirstFactorMeasurement measure_first(const PureState4 &state, const BasisMeasurement &basis, Rng &rng) {
    auto b0 = project_first(state, basis, 0);
    int outcome = rng.uniform() < b0.probability ? 0 : 1;
    auto chosen = outcome == 0 ? b0 : project_first(state, basis, 1);
    if (!chosen.collapsed) {
        outcome ^= 1;
        chosen = outcome == 0 ? b0 : project_first(state, basis, 1);
    }
    return {outcome, *chosen.collapsed, chosen.probability};
}

int measure_qubit(const UnitVector2 &psi, const BasisMeasurement &basis, Rng &rng) {
    double p0 = fidelity(basis.phi(), psi);
    return rng.uniform() < p0 ? 0 : 1;
}

UnitVector2 haar_random_state(Rng &rng) {
    double cos_theta = rng.uniform(-1, 1);
    double phase = rng.uniform(0, 2 * std::numbers::pi);
    double c = std::sqrt((1 + cos_theta) / 2);
    double s = std::sqrt((1 - cos_theta) / 2);
    return UnitVector2::normalized({c, std::polar(s, phase)});
}

UnitVector2 subcircle_state(double theta) {
    return UnitVector2::normalized({std::cos(theta / 2), std::sin(theta / 2)});
}

Unitary2 haar_random_unitary(Rng &rng) {
    auto col = haar_random_state(rng);
    Complex global = std::polar(1.0, rng.uniform(0, 2 * std::numbers::pi));
    Complex a = col.a0();
    Complex b = col.a1();
    return Unitary2(global * Matrix2(a, -std::conj(b), b, std::conj(a)));
}

PureState4 random_pure_state4(Rng &rng) {
    PureState4::Amplitudes amps;
    for (auto &z : amps) {
        double re = rng.normal();
        double im = rng.normal();
        z = {re, im};
    }
    return PureState4::normalized(amps);
}

std::string_view to_string(OperatorLabel label) {
    switch (label) {
        case OperatorLabel::M:
            return "M";
        case OperatorLabel::N:
            return "N";
        case OperatorLabel::J:
            return "J";
        case OperatorLabel::K:
            return "K";
    }
    return "?";
}

std::optional<OperatorLabel> parse_operator_label(std::string_view text) {
    if (text == "M") return OperatorLabel::M;
    if (text == "N") return OperatorLabel::N;
    if (text == "J") return OperatorLabel::J;
    if (text == "K") return OperatorLabel::K;
    return std::nullopt;
}

CommitBit commit_bit_from_int(int value) {
    if (value != 0 && value != 1) {
        throw ValidationError("commit bit must be 0 or 1, got " + std::to_string(value));
    }
    return static_cast<CommitBit>(value);
}

std::pair<OperatorLabel, OperatorLabel> operators_for(CommitBit chi) {
    if (chi == CommitBit::zero) {
        return {OperatorLabel::M, OperatorLabel::N};
    }
    return {OperatorLabel::J, OperatorLabel::K};
}

CommitBit bit_of(OperatorLabel label) {
    return (label == OperatorLabel::M || label == OperatorLabel::N) ? CommitBit::zero : CommitBit::one;
}

const Unitary2 &OperatorQuadruple::get(OperatorLabel label) const {
    switch (label) {
        case OperatorLabel::M:
            return M;
        case OperatorLabel::N:
            return N;
        case OperatorLabel::J:
            return J;
        case OperatorLabel::K:
            return K;
    }
    throw ProtocolAbort("unknown operator label");
}

OperatorQuadruple paper_quadruple() {
    const Matrix2 id = Matrix2::identity();
    const double norm = 1 / (2 * std::numbers::sqrt2);
    Matrix2 j = (Complex(1, -1) * norm) * (id + kI * (sigma_x() - sigma_y() + sigma_z()));
    Matrix2 k = (Complex(1, 1) * norm) * (id + kI * (sigma_x() + sigma_y() - sigma_z()));
    return {Unitary2(id), Unitary2(-kI * sigma_y()), Unitary2(j), Unitary2(k)};
}

Matrix4 Matrix4::outer(const PureState4 &ket, const PureState4 &bra) {
    Matrix4 r;
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            r(i, j) = ket[i] * std::conj(bra[j]);
        }
    }
    return r;
}

Matrix4 Matrix4::kron(const Matrix2 &first, const Matrix2 &second) {
    Matrix4 r;
    for (int a = 0; a < 2; a++) {
        for (int b = 0; b < 2; b++) {
            for (int c = 0; c < 2; c++) {
                for (int d = 0; d < 2; d++) {
                    r(2 * a + c, 2 * b + d) = first(a, b) * second(c, d);
                }
            }
        }
    }
    return r;
}

Matrix4 Matrix4::adjoint() const {
    Matrix4 r;
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            r(i, j) = std::conj((*this)(j, i));
        }
    }
    return r;
}

Complex Matrix4::trace() const {
    return e_[0] + e_[5] + e_[10] + e_[15];
}

double Matrix4::frobenius_norm() const {
    double s = 0;
    for (auto z : e_) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

Matrix4 operator+(const Matrix4 &x, const Matrix4 &y) {
    Matrix4 r;
    for (int i = 0; i < 16; i++) {
        r.e_[i] = x.e_[i] + y.e_[i];
    }
    return r;
}

Matrix4 operator-(const Matrix4 &x, const Matrix4 &y) {
    Matrix4 r;
    for (int i = 0; i < 16; i++) {
        r.e_[i] = x.e_[i] - y.e_[i];
    }
    return r;
}

Matrix4 operator*(const Matrix4 &x, const Matrix4 &y) {
    Matrix4 r;
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            Complex acc = 0;
            for (int k = 0; k < 4; k++) {
                acc += x(i, k) * y(k, j);
            }
            r(i, j) = acc;
        }
    }
    return r;
}

Matrix4 operator*(Complex s, const Matrix4 &x) {
    Matrix4 r;
    for (int i = 0; i < 16; i++) {
        r.e_[i] = s * x.e_[i];
    }
    return r;
}

HermitianEigen4 hermitian_eigen(const Matrix4 &h) {
    Eigen::Matrix4cd m;
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            m(i, j) = h(i, j);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw ValidationError("Hermitian eigen-decomposition failed");
    }
    HermitianEigen4 out;
    for (int i = 0; i < 4; i++) {
        out.values[i] = solver.eigenvalues()(i);
        for (int j = 0; j < 4; j++) {
            out.vectors[i][j] = solver.eigenvectors()(j, i);
        }
    }
    return out;
}

double trace_distance(const Matrix4 &rho, const Matrix4 &sigma) {
    auto eig = hermitian_eigen(rho - sigma);
    double s = 0;
    for (double v : eig.values) {
        s += std::abs(v);
    }
    return s / 2;
}

Density2 partial_trace(const Matrix4 &rho, Factor keep) {
    Matrix2 r;
    for (int a = 0; a < 2; a++) {
        for (int b = 0; b < 2; b++) {
            Complex acc = 0;
            for (int k = 0; k < 2; k++) {
                acc += keep == Factor::second ? rho(2 * k + a, 2 * k + b) : rho(2 * a + k, 2 * b + k);
            }
            r(a, b) = acc;
        }
    }
    return Density2(r, 1e-10);
}

const char *to_string(AttackErrorKind kind) {
    switch (kind) {
        case AttackErrorKind::degenerate_input:
            return "degenerate-input";
        case AttackErrorKind::not_concealing:
            return "not-concealing";
        case AttackErrorKind::proportional_operators:
            return "proportional-operators";
        case AttackErrorKind::non_unitary:
            return "non-unitary";
    }
    return "unknown";
}

}  // namespace nsqbc
