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

#include <cmath>
#include <variant>

#include "nsqbc/adversary.h"
#include "nsqbc/analysis.h"
#include "nsqbc/errors.h"

namespace nsqbc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct BobCheck {
    int outcome;
    bool verified;
};

BobCheck bob_check(const UnitVector2 &received, OperatorLabel announced, const BasisMeasurement &basis,
                   int ttp_outcome, const OperatorQuadruple &quadruple, Rng &rng) {
    UnitVector2 recovered = apply(quadruple.get(announced).adjoint(), received);
    int outcome = measure_qubit(recovered, basis, rng);
    return {outcome, outcome != ttp_outcome};
}

/// Unit eigenvector of the larger eigenvalue of a Hermitian 2x2 matrix.
UnitVector2 top_eigenvector(const Matrix2 &h) {
    double top = hermitian_eigenvalues(h)[1];
    Complex b = h(0, 1);
    if (std::abs(b) > 1e-14) {
        return UnitVector2::normalized({b, top - h(0, 0)});
    }
    return h(0, 0).real() >= h(1, 1).real() ? ket0() : ket1();
}

/// Projector onto the strictly positive eigenspace, or nullopt if there is none.
std::optional<Matrix4> positive_projector(const Matrix4 &h) {
    auto eig = hermitian_eigen(h);
    Matrix4 p;
    bool any = false;
    for (int i = 0; i < 4; i++) {
        if (eig.values[i] > 1e-12) {
            PureState4 v(eig.vectors[i], 1e-9);
            p = p + Matrix4::outer(v, v);
            any = true;
        }
    }
    if (!any) {
        return std::nullopt;
    }
    return p;
}

PureState4::Amplitudes mul(const Matrix4 &m, const PureState4 &s) {
    PureState4::Amplitudes out{};
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            out[i] += m(i, j) * s[j];
        }
    }
    return out;
}

double norm_sq(const PureState4::Amplitudes &a) {
    double s = 0;
    for (auto z : a) {
        s += std::norm(z);
    }
    return s;
}

OperatorQuadruple swapped(const OperatorQuadruple &q) {
    return {q.J, q.K, q.M, q.N};
}

/// Ancilla unitary a purified-commitment Alice applies at unveil time.
CoefficientMatrix purified_attack_matrix(const AliceStrategy &alice, const UnitVector2 &psi,
                                         const OperatorQuadruple &quadruple, std::vector<std::string> &flags) {
    if (const auto *d = std::get_if<DelayedAlice>(&alice)) {
        if (d->declared == d->actual) {
            return CoefficientMatrix::identity();
        }
        if (d->actual == CommitBit::zero) {
            return d->S;
        }
        return CoefficientMatrix::from(d->S.matrix().adjoint());
    }
    const auto &o = std::get<PerStateOptimalAlice>(alice);
    if (o.declared == o.actual) {
        return CoefficientMatrix::identity();
    }
    OperatorQuadruple q = o.actual == CommitBit::zero ? quadruple : swapped(quadruple);
    try {
        CoefficientMatrix S = solve_cheat_coefficients(psi, q);
        if (S.unitarity_residual() <= kUnitarityTol) {
            return S;
        }
        flags.emplace_back("nearest_unitary_fallback");
        return nearest_unitary(S);
    } catch (const AttackError &) {
        flags.emplace_back("degenerate_state_identity_fallback");
        return CoefficientMatrix::identity();
    }
}

struct HiddenRoundState {
    std::optional<PureState4> purified;
    /// Bob's copy after his own Helstrom measurement, if he made one.
    std::optional<UnitVector2> bob_post;
    std::optional<PureState4> bob_joint_post;
    BasisMeasurement announce_basis = BasisMeasurement::computational();
    int announce_outcome = 0;
};

}  // namespace

void ProtocolConfig::validate() const {
    if (rounds < 1) {
        throw ValidationError("rounds must be >= 1, got " + std::to_string(rounds));
    }
    basis_source.validate();
}

PrecommitRecord precommit_round(const StateSource &source, Rng &rng) {
    BasisMeasurement basis(source.sample(rng));
    auto m = measure_first(singlet(), basis, rng);
    return {basis, m.outcome, m.collapsed};
}

std::vector<PrecommitRecord> precommit(const ProtocolConfig &config) {
    config.validate();
    std::vector<PrecommitRecord> out;
    out.reserve(static_cast<size_t>(config.rounds));
    for (std::int64_t i = 0; i < config.rounds; i++) {
        Rng rng = Rng::substream(config.seed, StreamDomain::protocol_round, static_cast<std::uint64_t>(i));
        out.push_back(precommit_round(config.basis_source, rng));
    }
    return out;
}

HonestCommit commit_honest(CommitBit chi, const UnitVector2 &alice_state, const OperatorQuadruple &quadruple,
                           Rng &rng) {
    auto [first, second] = operators_for(chi);
    OperatorLabel label = rng.uniform_int(2) == 0 ? first : second;
    return {label, apply(quadruple.get(label), alice_state)};
}

PureState4 commit_purified(CommitBit chi, const UnitVector2 &alice_state, const OperatorQuadruple &quadruple) {
    auto [first, second] = operators_for(chi);
    Vector2 u = quadruple.get(first).matrix() * alice_state.vec();
    Vector2 w = quadruple.get(second).matrix() * alice_state.vec();
    const double r = 1 / std::sqrt(2.0);
    return PureState4::normalized({r * u.a0, r * u.a1, r * w.a0, r * w.a1});
}

bool unveil_verify(const UnitVector2 &received, OperatorLabel announced, const BasisMeasurement &basis,
                   int ttp_outcome, const OperatorQuadruple &quadruple, Rng &rng) {
    return bob_check(received, announced, basis, ttp_outcome, quadruple, rng).verified;
}

bool unveil_verify(const UnitVector2 &received, std::string_view announced, const BasisMeasurement &basis,
                   int ttp_outcome, const OperatorQuadruple &quadruple, Rng &rng) {
    auto label = parse_operator_label(announced);
    if (!label) {
        throw ProtocolAbort("announced operator '" + std::string(announced) + "' is not in the quadruple");
    }
    return unveil_verify(received, *label, basis, ttp_outcome, quadruple, rng);
}

const char *to_string(Phase phase) {
    switch (phase) {
        case Phase::pre_commitment:
            return "pre-commitment";
        case Phase::commitment:
            return "commitment";
        case Phase::holding:
            return "holding";
        case Phase::unveiling:
            return "unveiling";
    }
    return "unknown";
}

const char *to_string(StateOrigin origin) {
    switch (origin) {
        case StateOrigin::ttp_singlet:
            return "ttp_singlet";
        case StateOrigin::ttp_fabricated:
            return "ttp_fabricated";
        case StateOrigin::bob_probe:
            return "bob_probe";
        case StateOrigin::bob_entangled_probe:
            return "bob_entangled_probe";
    }
    return "unknown";
}

const char *to_string(Verdict::Kind kind) {
    switch (kind) {
        case Verdict::Kind::accept:
            return "accept";
        case Verdict::Kind::reject:
            return "reject";
        case Verdict::Kind::abort:
            return "abort";
    }
    return "unknown";
}

Transcript run_protocol(const ProtocolConfig &config, CommitBit chi, const AliceStrategy &alice,
                        const TtpStrategy &ttp, const BobStrategy &bob, const PhaseObserver &observer) {
    config.validate();
    Transcript t{config, committed_bit(alice, chi), alice, ttp, bob, {}, {}, {}};
    const auto &quad = config.quadruple;
    const auto n = static_cast<size_t>(config.rounds);
    const bool purified_alice = !std::holds_alternative<HonestAlice>(alice);
    const auto *probe = std::get_if<ProbeBob>(&bob);
    const auto *entangled = std::get_if<EntangledProbeBob>(&bob);

    auto enter = [&](Phase p) {
        t.phase_log.push_back(p);
        if (observer) {
            observer(p, t);
        }
    };

    std::vector<Rng> rngs;
    std::vector<HiddenRoundState> hidden(n);
    rngs.reserve(n);
    t.rounds.resize(n);

    try {
        validate(alice);
        validate(ttp);
        if (purified_alice && (probe || entangled)) {
            throw ProtocolAbort("purified Alice strategies are only simulated against an honest Bob");
        }

        enter(Phase::pre_commitment);
        for (size_t i = 0; i < n; i++) {
            rngs.push_back(Rng::substream(config.seed, StreamDomain::protocol_round, i));
            auto &rec = t.rounds[i];
            auto &h = hidden[i];
            rec.index = static_cast<std::int64_t>(i);
            if (probe) {
                rec.origin = StateOrigin::bob_probe;
                rec.ttp_basis = BasisMeasurement(probe->psi);
                rec.ttp_outcome = 1;
                rec.alice_state = probe->psi;
                h.announce_basis = rec.ttp_basis;
                h.announce_outcome = 1;
            } else if (entangled) {
                rec.origin = StateOrigin::bob_entangled_probe;
            } else {
                PrecommitRecord honest = precommit_round(config.basis_source, rngs[i]);
                TamperedRound tampered = ttp_tamper(ttp, honest, config.basis_source, rngs[i]);
                rec.origin = tampered.origin;
                rec.ttp_basis = tampered.delivered.ttp_basis;
                rec.ttp_outcome = tampered.delivered.ttp_outcome;
                rec.alice_state = tampered.delivered.alice_state;
                rec.flags = std::move(tampered.flags);
                h.announce_basis = tampered.announced_basis;
                h.announce_outcome = tampered.announced_outcome;
            }
        }

        enter(Phase::commitment);
        for (size_t i = 0; i < n; i++) {
            auto &rec = t.rounds[i];
            if (entangled) {
                auto [first, second] = operators_for(t.committed_bit);
                OperatorLabel label = rngs[i].uniform_int(2) == 0 ? first : second;
                rec.alice_operator = label;
                rec.sent_joint_state = entangled->state.apply_first(quad.get(label));
            } else if (purified_alice) {
                hidden[i].purified = commit_purified(t.committed_bit, *rec.alice_state, quad);
            } else {
                auto c = commit_honest(t.committed_bit, *rec.alice_state, quad, rngs[i]);
                rec.alice_operator = c.label;
                rec.sent_state = c.sent_state;
            }
        }

        enter(Phase::holding);
        if (probe) {
            RhoPair rp = rho_pair(quad, probe->psi);
            for (size_t i = 0; i < n; i++) {
                auto &rec = t.rounds[i];
                if (rp.distance <= kNormTol) {
                    rec.bob_guess = static_cast<int>(rngs[i].uniform_int(2));
                    continue;
                }
                BasisMeasurement helstrom(top_eigenvector(rp.rho0.matrix() - rp.rho1.matrix()));
                int outcome = measure_qubit(*rec.sent_state, helstrom, rngs[i]);
                rec.bob_guess = outcome;
                hidden[i].bob_post = helstrom.result(outcome);
            }
        } else if (entangled) {
            Matrix4 delta = bob_entangled_probe(quad, entangled->state, CommitBit::zero) -
                            bob_entangled_probe(quad, entangled->state, CommitBit::one);
            auto projector = positive_projector(delta);
            for (size_t i = 0; i < n; i++) {
                auto &rec = t.rounds[i];
                if (!projector) {
                    rec.bob_guess = static_cast<int>(rngs[i].uniform_int(2));
                    continue;
                }
                auto plus = mul(*projector, *rec.sent_joint_state);
                double p_plus = norm_sq(plus);
                int guess = rngs[i].uniform() < p_plus ? 0 : 1;
                if (guess == 1) {
                    PureState4::Amplitudes minus;
                    for (int k = 0; k < 4; k++) {
                        minus[k] = (*rec.sent_joint_state)[k] - plus[k];
                    }
                    plus = minus;
                }
                if (norm_sq(plus) < kDegenerateBranch) {
                    guess ^= 1;
                    plus = guess == 0 ? mul(*projector, *rec.sent_joint_state) : plus;
                }
                rec.bob_guess = guess;
                hidden[i].bob_joint_post = PureState4::normalized(plus);
            }
        }

        enter(Phase::unveiling);
        // Alice announces every P_i before the TTP reveals any basis.
        for (size_t i = 0; i < n; i++) {
            auto &rec = t.rounds[i];
            if (purified_alice) {
                CommitBit declared = std::holds_alternative<DelayedAlice>(alice)
                                         ? std::get<DelayedAlice>(alice).declared
                                         : std::get<PerStateOptimalAlice>(alice).declared;
                CoefficientMatrix S = purified_attack_matrix(alice, *rec.alice_state, quad, rec.flags);
                auto out = delayed_measurement_attack(*hidden[i].purified, S, declared, *rec.alice_state, quad,
                                                      rngs[i]);
                rec.announced_operator = out.announced;
                rec.sent_state = out.bob_qubit;
            } else {
                rec.announced_operator = rec.alice_operator;
            }
        }
        for (size_t i = 0; i < n; i++) {
            auto &rec = t.rounds[i];
            if (!entangled) {
                rec.announced_basis = hidden[i].announce_basis;
                rec.announced_outcome = hidden[i].announce_outcome;
            }
        }
        for (size_t i = 0; i < n; i++) {
            auto &rec = t.rounds[i];
            if (entangled) {
                const PureState4 &held = hidden[i].bob_joint_post ? *hidden[i].bob_joint_post : *rec.sent_joint_state;
                PureState4 undone = held.apply_first(quad.get(*rec.announced_operator).adjoint());
                double pass = fidelity(entangled->state, undone);
                rec.bob_outcome = rngs[i].uniform() < pass ? 0 : 1;
                rec.verified = *rec.bob_outcome == 0;
            } else {
                const UnitVector2 &held = hidden[i].bob_post ? *hidden[i].bob_post : *rec.sent_state;
                auto check = bob_check(held, *rec.announced_operator, *rec.announced_basis, *rec.announced_outcome,
                                       quad, rngs[i]);
                rec.bob_outcome = check.outcome;
                rec.verified = check.verified;
            }
            if (!*rec.verified && !t.verdict.first_failed_round) {
                t.verdict.first_failed_round = rec.index;
            }
        }
        t.verdict.kind = t.verdict.first_failed_round ? Verdict::Kind::reject : Verdict::Kind::accept;
    } catch (const ProtocolAbort &e) {
        t.verdict = {Verdict::Kind::abort, std::nullopt, e.what()};
    } catch (const AttackError &e) {
        t.verdict = {Verdict::Kind::abort, std::nullopt, e.what()};
    } catch (const ValidationError &e) {
        t.verdict = {Verdict::Kind::abort, std::nullopt, e.what()};
    }
    return t;
}

TranscriptSummary summarize(const Transcript &t) {
    TranscriptSummary s;
    s.verdict = to_string(t.verdict.kind);
    s.first_failed_round = t.verdict.first_failed_round;
    s.rounds = static_cast<std::int64_t>(t.rounds.size());
    std::int64_t checked = 0;
    std::int64_t guesses = 0;
    std::int64_t correct = 0;
    for (const auto &r : t.rounds) {
        if (r.verified) {
            checked++;
            s.verified_rounds += *r.verified ? 1 : 0;
        }
        if (r.bob_guess) {
            guesses++;
            correct += *r.bob_guess == to_int(t.committed_bit) ? 1 : 0;
        }
    }
    if (checked > 0) {
        s.pass_rate = static_cast<double>(s.verified_rounds) / static_cast<double>(checked);
        s.detection_rate = 1 - s.pass_rate;
    }
    if (guesses > 0) {
        s.bob_guess_accuracy = static_cast<double>(correct) / static_cast<double>(guesses);
    }
    return s;
}

CoefficientMatrix CoefficientMatrix::hadamard() {
    const double r = 1 / std::sqrt(2.0);
    return {r, r, r, -r};
}

void validate(const AliceStrategy &s) {
    if (const auto *d = std::get_if<DelayedAlice>(&s)) {
        double res = d->S.unitarity_residual();
        if (res > kUnitarityTol) {
            throw AttackError(AttackErrorKind::non_unitary,
                              "delayed attack matrix is not unitary (residual " + std::to_string(res) + ")");
        }
    }
}

void validate(const TtpStrategy &s) {
    if (const auto *w = std::get_if<WrongBasisTtp>(&s)) {
        if (!(w->p >= 0 && w->p <= 1)) {
            throw ValidationError("wrong_basis probability must lie in [0, 1]");
        }
    }
}

CommitBit committed_bit(const AliceStrategy &s, CommitBit chi) {
    return std::visit(Overloaded{
                          [&](const HonestAlice &) { return chi; },
                          [](const DelayedAlice &d) { return d.actual; },
                          [](const PerStateOptimalAlice &o) { return o.actual; },
                      },
                      s);
}

}  // namespace nsqbc
