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

#include "nsqbc/analysis.h"

#include <cmath>
#include <thread>

#include "nsqbc/errors.h"

namespace nsqbc {

namespace {

Matrix2 sandwich_sum(const Unitary2 &x, const Unitary2 &y, const Matrix2 &e) {
    return x.matrix() * e * x.matrix().adjoint() + y.matrix() * e * y.matrix().adjoint();
}

Density2 ensemble(const Unitary2 &x, const Unitary2 &y, const UnitVector2 &psi) {
    Vector2 u = x.matrix() * psi.vec();
    Vector2 w = y.matrix() * psi.vec();
    return Density2(Complex(0.5) * (Matrix2::outer(u, u) + Matrix2::outer(w, w)));
}

struct BlockSums {
    double sum = 0;
    double sum_sq = 0;
};

void require_unit_modulus(Complex z, const char *name) {
    if (std::abs(std::abs(z) - 1) > kNormTol) {
        throw ValidationError(std::string(name) + " must have unit modulus");
    }
}

}  // namespace

RhoPair rho_pair(const OperatorQuadruple &q, const UnitVector2 &psi) {
    Density2 rho0 = ensemble(q.M, q.N, psi);
    Density2 rho1 = ensemble(q.J, q.K, psi);
    double d = trace_distance(rho0, rho1);
    return {rho0, rho1, d};
}

ConcealmentReport concealment_check(const OperatorQuadruple &q, double tol) {
    const Matrix2 e00 = Matrix2::outer(ket0(), ket0());
    const Matrix2 e11 = Matrix2::outer(ket1(), ket1());
    const Matrix2 e01 = Matrix2::outer(ket0(), ket1());
    auto residual = [&](const Matrix2 &e) {
        return (sandwich_sum(q.M, q.N, e) - sandwich_sum(q.J, q.K, e)).frobenius_norm();
    };
    ConcealmentReport r;
    r.residual1 = residual(e00);
    r.residual2 = residual(e11);
    r.residual3 = residual(e01);
    r.tol = tol;
    r.passes = r.residual1 <= tol && r.residual2 <= tol && r.residual3 <= tol;
    return r;
}

std::vector<ProbeWitness> canonical_probes(const OperatorQuadruple &q) {
    std::vector<std::pair<const char *, UnitVector2>> probes = {
        {"|0>", ket0()},       {"|1>", ket1()},       {"|+>", ket_plus()},
        {"|->", ket_minus()}, {"|+i>", ket_plus_i()}, {"|-i>", ket_minus_i()},
    };
    std::vector<ProbeWitness> out;
    for (const auto &[name, psi] : probes) {
        out.push_back({name, psi, rho_pair(q, psi).distance});
    }
    return out;
}

ProbeWitness strongest_probe(const OperatorQuadruple &q) {
    auto probes = canonical_probes(q);
    size_t best = 0;
    for (size_t i = 1; i < probes.size(); i++) {
        if (probes[i].distance > probes[best].distance + 1e-15) {
            best = i;
        }
    }
    return probes[best];
}

double cheat_success(const OperatorQuadruple &q, const CoefficientMatrix &S, const UnitVector2 &psi) {
    Vector2 mpsi = q.M.matrix() * psi.vec();
    Vector2 npsi = q.N.matrix() * psi.vec();
    Vector2 to_j = S.a * mpsi + S.b * npsi;
    Vector2 to_k = S.c * mpsi + S.d * npsi;
    return (fidelity(to_j, q.J.matrix() * psi.vec()) + fidelity(to_k, q.K.matrix() * psi.vec())) / 2;
}

ClosedFormFidelity expected_cheat_fidelity_closed(const CoefficientMatrix &S) {
    if (S.unitarity_residual() <= kUnitarityTol) {
        return {0.5 + 2 * (S.a * std::conj(S.b)).real() / 6, true};
    }
    double weight = std::norm(S.a) + std::norm(S.b) + std::norm(S.c) + std::norm(S.d);
    double cross = (S.a * std::conj(S.b) - S.c * std::conj(S.d)).real();
    return {weight / 4 + cross / 6, false};
}

FidelityEstimate expected_cheat_fidelity_mc(const OperatorQuadruple &q, const CoefficientMatrix &S,
                                            const StateSource &sampler, std::int64_t n, Rng &rng,
                                            unsigned threads) {
    if (n < 100) {
        throw ValidationError("Monte Carlo estimate needs at least 100 samples");
    }
    sampler.validate();
    const std::uint64_t base = rng.next_u64();
    const std::int64_t blocks = (n + kMonteCarloBlock - 1) / kMonteCarloBlock;
    std::vector<BlockSums> sums(static_cast<size_t>(blocks));

    auto run_block = [&](std::int64_t b) {
        Rng block_rng = Rng::substream(base, StreamDomain::mc_block, static_cast<std::uint64_t>(b));
        std::int64_t count = std::min(kMonteCarloBlock, n - b * kMonteCarloBlock);
        BlockSums acc;
        for (std::int64_t i = 0; i < count; i++) {
            double f = cheat_success(q, S, sampler.sample(block_rng));
            acc.sum += f;
            acc.sum_sq += f * f;
        }
        sums[static_cast<size_t>(b)] = acc;
    };

    threads = std::max(1u, threads);
    if (threads == 1 || blocks == 1) {
        for (std::int64_t b = 0; b < blocks; b++) {
            run_block(b);
        }
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; w++) {
            pool.emplace_back([&, w] {
                for (std::int64_t b = w; b < blocks; b += threads) {
                    run_block(b);
                }
            });
        }
    }

    BlockSums total;
    for (const auto &s : sums) {
        total.sum += s.sum;
        total.sum_sq += s.sum_sq;
    }
    const double count = static_cast<double>(n);
    double mean = total.sum / count;
    double var = std::max(0.0, (total.sum_sq - count * mean * mean) / (count - 1));
    return {mean, std::sqrt(var / count), n, sampler};
}

double detection_probability(std::int64_t n_rounds, double per_round_success) {
    if (n_rounds < 0 || !(per_round_success >= 0 && per_round_success <= 1)) {
        throw ValidationError("detection_probability needs n >= 0 and p in [0, 1]");
    }
    return 1 - std::pow(per_round_success, static_cast<double>(n_rounds));
}

OperatorQuadruple table2_quadruple(const Table2Params &p) {
    if (std::abs(std::norm(p.x) + std::norm(p.y) - 1) > kNormTol) {
        throw ValidationError("table2 parameters need |x|^2 + |y|^2 = 1");
    }
    if (std::abs(p.y) < kNormTol) {
        throw ValidationError("table2 parameters need y != 0");
    }
    require_unit_modulus(p.alpha, "alpha");
    if (p.first_coeffs.unitarity_residual() > kUnitarityTol || p.second_coeffs.unitarity_residual() > kUnitarityTol) {
        throw ValidationError("table2 coefficient matrices must be unitary");
    }
    const auto &[a, b, c, d] = p.first_coeffs;
    const auto &[s, t, u, v] = p.second_coeffs;
    const Complex x = p.x;
    const Complex y = p.y;
    const Complex al = p.alpha;
    const Complex xb = std::conj(x);
    const Complex yb = std::conj(y);

    // Columns are the images of |0> and |1>.
    Matrix2 n(x, al * yb, y, -al * xb);
    Matrix2 j(a + b * x, t * al * yb, b * y, s - t * al * xb);
    Matrix2 k(c + d * x, v * al * yb, d * y, u - v * al * xb);
    auto admit = [](const Matrix2 &m, const char *name) {
        double res = m.unitarity_residual();
        if (res > kUnitarityTol) {
            throw ValidationError(std::string("generator-rejection: ") + name + " is not unitary (residual " +
                                  std::to_string(res) + ")");
        }
        return Unitary2(m);
    };
    return {Unitary2::identity(), admit(n, "N"), admit(j, "J"), admit(k, "K")};
}

Table3Result table3_quadruple(const Table3Params &p, double tol) {
    require_unit_modulus(p.j, "j");
    require_unit_modulus(p.k, "k");
    require_unit_modulus(p.l, "l");
    require_unit_modulus(p.m, "m");
    require_unit_modulus(p.alpha, "alpha");
    require_unit_modulus(p.beta, "beta");
    require_unit_modulus(p.gamma, "gamma");
    require_unit_modulus(p.delta, "delta");
    OperatorQuadruple q{Unitary2(Matrix2(p.j, 0, 0, p.k)), Unitary2(Matrix2(p.l, 0, 0, p.m)),
                        Unitary2(Matrix2(p.alpha, 0, 0, p.beta)), Unitary2(Matrix2(p.gamma, 0, 0, p.delta))};
    Complex lhs = p.j * std::conj(p.k) + p.l * std::conj(p.m);
    Complex rhs = p.alpha * std::conj(p.beta) + p.gamma * std::conj(p.delta);
    return {q, lhs, rhs, std::abs(lhs - rhs) <= tol};
}

}  // namespace nsqbc
