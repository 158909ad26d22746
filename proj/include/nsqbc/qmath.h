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
#include <complex>
#include <optional>
#include <string_view>
#include <utility>

#include "nsqbc/rng.h"

namespace nsqbc {

using Complex = std::complex<double>;

inline constexpr double kUnitarityTol = 1e-10;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kDegenerateBranch = 1e-15;

/// Unconstrained qubit-sized vector (amplitudes of |0>, |1>).
struct Vector2 {
    Complex a0{};
    Complex a1{};

    double norm_sq() const {
        return std::norm(a0) + std::norm(a1);
    }
    double norm() const;

    friend Vector2 operator+(const Vector2 &x, const Vector2 &y) {
        return {x.a0 + y.a0, x.a1 + y.a1};
    }
    friend Vector2 operator-(const Vector2 &x, const Vector2 &y) {
        return {x.a0 - y.a0, x.a1 - y.a1};
    }
    friend Vector2 operator*(Complex s, const Vector2 &x) {
        return {s * x.a0, s * x.a1};
    }
};

/// <x|y>, conjugate-linear in the first argument.
inline Complex inner(const Vector2 &x, const Vector2 &y) {
    return std::conj(x.a0) * y.a0 + std::conj(x.a1) * y.a1;
}

/// Normalized pure qubit state. Construction checks |a0|^2 + |a1|^2 = 1.
class UnitVector2 {
   public:
    UnitVector2(Complex a0, Complex a1, double tol = kNormTol);
    explicit UnitVector2(const Vector2 &v, double tol = kNormTol) : UnitVector2(v.a0, v.a1, tol) {
    }

    /// Rescales v to unit norm; throws ValidationError if v is (numerically) zero.
    static UnitVector2 normalized(const Vector2 &v);

    Complex a0() const {
        return v_.a0;
    }
    Complex a1() const {
        return v_.a1;
    }
    const Vector2 &vec() const {
        return v_;
    }
    operator const Vector2 &() const {
        return v_;
    }

    /// Canonical orthogonal completion (-conj(a1), conj(a0)).
    UnitVector2 orthogonal() const;

   private:
    struct Trusted {};
    UnitVector2(Trusted, Vector2 v) : v_(v) {
    }
    Vector2 v_;
};

UnitVector2 ket0();
UnitVector2 ket1();
UnitVector2 ket_plus();
UnitVector2 ket_minus();
/// (|0> + i|1>)/sqrt(2)
UnitVector2 ket_plus_i();
/// (|0> - i|1>)/sqrt(2)
UnitVector2 ket_minus_i();

/// Whether m*conj(n) is real, i.e. the state lies on the |0>,|+>,|1>,|-> circle.
bool on_subcircle(const Vector2 &v, double tol = kNormTol);

/// Row-major 2x2 complex matrix.
class Matrix2 {
   public:
    constexpr Matrix2() = default;
    constexpr Matrix2(Complex e00, Complex e01, Complex e10, Complex e11) : e_{e00, e01, e10, e11} {
    }

    static Matrix2 identity() {
        return {1, 0, 0, 1};
    }
    static Matrix2 outer(const Vector2 &ket, const Vector2 &bra);

    Complex &operator()(int r, int c) {
        return e_[2 * r + c];
    }
    Complex operator()(int r, int c) const {
        return e_[2 * r + c];
    }

    Matrix2 adjoint() const;
    Complex trace() const {
        return e_[0] + e_[3];
    }
    Complex det() const {
        return e_[0] * e_[3] - e_[1] * e_[2];
    }
    double frobenius_norm() const;
    /// ||U^dagger U - I||_F
    double unitarity_residual() const;
    double hermiticity_residual() const;

    friend Matrix2 operator+(const Matrix2 &x, const Matrix2 &y);
    friend Matrix2 operator-(const Matrix2 &x, const Matrix2 &y);
    friend Matrix2 operator*(const Matrix2 &x, const Matrix2 &y);
    friend Matrix2 operator*(Complex s, const Matrix2 &x);
    friend Vector2 operator*(const Matrix2 &m, const Vector2 &v) {
        return {m(0, 0) * v.a0 + m(0, 1) * v.a1, m(1, 0) * v.a0 + m(1, 1) * v.a1};
    }

   private:
    std::array<Complex, 4> e_{};
};

/// Frobenius inner product tr(x^dagger y).
Complex frobenius_inner(const Matrix2 &x, const Matrix2 &y);

/// Pauli matrices.
Matrix2 sigma_x();
Matrix2 sigma_y();
Matrix2 sigma_z();

/// Eigenvalues of a Hermitian 2x2 matrix in ascending order (closed form).
std::array<double, 2> hermitian_eigenvalues(const Matrix2 &h);

/// 2x2 unitary; construction checks ||U^dagger U - I||_F <= tol.
class Unitary2 {
   public:
    explicit Unitary2(const Matrix2 &m, double tol = kUnitarityTol);
    static Unitary2 identity() {
        return Unitary2(Matrix2::identity());
    }

    const Matrix2 &matrix() const {
        return m_;
    }
    operator const Matrix2 &() const {
        return m_;
    }
    Complex operator()(int r, int c) const {
        return m_(r, c);
    }
    Unitary2 adjoint() const;

    friend Unitary2 operator*(const Unitary2 &x, const Unitary2 &y) {
        return Unitary2(x.m_ * y.m_);
    }

   private:
    Matrix2 m_;
};

UnitVector2 apply(const Unitary2 &u, const UnitVector2 &psi);

/// |<psi|phi>|^2. psi may be unnormalized; the result then lies in [0, ||psi||^2].
double fidelity(const Vector2 &psi, const Vector2 &phi);

/// 2x2 density matrix; checks Hermiticity, unit trace and positivity.
class Density2 {
   public:
    explicit Density2(const Matrix2 &m, double tol = kNormTol);

    static Density2 pure(const UnitVector2 &psi);
    static Density2 maximally_mixed() {
        return Density2(0.5 * Matrix2::identity());
    }

    const Matrix2 &matrix() const {
        return m_;
    }
    Complex operator()(int r, int c) const {
        return m_(r, c);
    }

   private:
    Matrix2 m_;
};

double trace_distance(const Density2 &rho, const Density2 &sigma);
/// Helstrom success probability (1 + T(rho, sigma)) / 2 for equiprobable states.
double helstrom_probability(const Density2 &rho, const Density2 &sigma);

/// Pure state on a 2x2 system, basis order |00>,|01>,|10>,|11>.
/// The first factor is the ancilla / TTP side, the second the data qubit.
class PureState4 {
   public:
    using Amplitudes = std::array<Complex, 4>;

    explicit PureState4(const Amplitudes &amps, double tol = kNormTol);
    static PureState4 product(const UnitVector2 &first, const UnitVector2 &second);
    static PureState4 normalized(const Amplitudes &amps);

    Complex operator[](int i) const {
        return amps_[i];
    }
    const Amplitudes &amplitudes() const {
        return amps_;
    }

    /// (U (x) I)|state>
    PureState4 apply_first(const Unitary2 &u) const;
    /// (I (x) U)|state>
    PureState4 apply_second(const Unitary2 &u) const;

    /// Unnormalized second-factor vector (<phi| (x) I)|state>.
    Vector2 contract_first(const Vector2 &phi) const;

   private:
    Amplitudes amps_;
};

Complex inner(const PureState4 &x, const PureState4 &y);
double fidelity(const PureState4 &x, const PureState4 &y);

/// (|01> - |10>)/sqrt(2)
PureState4 singlet();

enum class Factor { first, second };
Density2 partial_trace(const PureState4 &state, Factor keep);

/// Projective measurement onto {|phi>, |phi_perp>}; outcome 0 is |phi>.
class BasisMeasurement {
   public:
    explicit BasisMeasurement(const UnitVector2 &phi) : phi_(phi) {
    }
    static BasisMeasurement computational() {
        return BasisMeasurement(ket0());
    }
    const UnitVector2 &phi() const {
        return phi_;
    }
    /// Result vector for outcome 0 (|phi>) or 1 (|phi_perp>).
    UnitVector2 result(int outcome) const;

   private:
    UnitVector2 phi_;
};

struct FirstFactorBranch {
    double probability;
    /// Normalized second-factor state; empty when probability < 1e-15.
    std::optional<UnitVector2> collapsed;
};

/// Deterministic projection of the first factor onto a basis outcome.
FirstFactorBranch project_first(const PureState4 &state, const BasisMeasurement &basis, int outcome);

struct FirstFactorMeasurement {
    int outcome;
    UnitVector2 collapsed;
    double probability;
};

FirstFactorMeasurement measure_first(const PureState4 &state, const BasisMeasurement &basis, Rng &rng);
int measure_qubit(const UnitVector2 &psi, const BasisMeasurement &basis, Rng &rng);

/// cos(t/2)|0> + e^{ip} sin(t/2)|1> with cos t uniform on [-1, 1], p uniform on [0, 2pi).
UnitVector2 haar_random_state(Rng &rng);
/// cos(theta/2)|0> + sin(theta/2)|1>
UnitVector2 subcircle_state(double theta);
/// Haar-distributed 2x2 unitary.
Unitary2 haar_random_unitary(Rng &rng);
/// Normalized Gaussian vector on the 2x2 system (generic entangled state).
PureState4 random_pure_state4(Rng &rng);

/// Which of the four commitment operators.
enum class OperatorLabel { M, N, J, K };
std::string_view to_string(OperatorLabel label);
std::optional<OperatorLabel> parse_operator_label(std::string_view text);

/// The committed bit chi.
enum class CommitBit { zero = 0, one = 1 };
inline int to_int(CommitBit b) {
    return static_cast<int>(b);
}
CommitBit commit_bit_from_int(int value);
/// (M, N) for chi = 0, (J, K) for chi = 1.
std::pair<OperatorLabel, OperatorLabel> operators_for(CommitBit chi);
CommitBit bit_of(OperatorLabel label);

struct OperatorQuadruple {
    Unitary2 M;
    Unitary2 N;
    Unitary2 J;
    Unitary2 K;

    const Unitary2 &get(OperatorLabel label) const;
};

/// M = I, N = -i sigma_y, J and K built from the Pauli combinations
/// J = (1-i)/(2 sqrt2) [I + i(sx - sy + sz)], K = (1+i)/(2 sqrt2) [I + i(sx + sy - sz)].
OperatorQuadruple paper_quadruple();

/// 4x4 complex matrix on the 2x2 system, row-major in the |00>,|01>,|10>,|11> basis.
class Matrix4 {
   public:
    Matrix4() = default;
    static Matrix4 outer(const PureState4 &ket, const PureState4 &bra);
    static Matrix4 kron(const Matrix2 &first, const Matrix2 &second);

    Complex &operator()(int r, int c) {
        return e_[4 * r + c];
    }
    Complex operator()(int r, int c) const {
        return e_[4 * r + c];
    }
    Matrix4 adjoint() const;
    Complex trace() const;
    double frobenius_norm() const;

    friend Matrix4 operator+(const Matrix4 &x, const Matrix4 &y);
    friend Matrix4 operator-(const Matrix4 &x, const Matrix4 &y);
    friend Matrix4 operator*(const Matrix4 &x, const Matrix4 &y);
    friend Matrix4 operator*(Complex s, const Matrix4 &x);

   private:
    std::array<Complex, 16> e_{};
};

struct HermitianEigen4 {
    /// Ascending eigenvalues.
    std::array<double, 4> values;
    /// vectors[i] is the unit eigenvector of values[i].
    std::array<PureState4::Amplitudes, 4> vectors;
};

HermitianEigen4 hermitian_eigen(const Matrix4 &h);
/// (1/2) sum |eigenvalues(rho - sigma)| for 4x4 density matrices.
double trace_distance(const Matrix4 &rho, const Matrix4 &sigma);
/// Reduced state of a 4x4 density matrix.
Density2 partial_trace(const Matrix4 &rho, Factor keep);

}  // namespace nsqbc
