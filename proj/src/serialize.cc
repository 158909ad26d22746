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

#include "nsqbc/serialize.h"

#include <charconv>
#include <cmath>
#include <set>

#include "nsqbc/errors.h"

namespace nsqbc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const Json &field(const Json &j, const char *key, const std::string &path) {
    if (!j.is_object()) {
        throw ConfigError(path, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        throw ConfigError(path + "." + key, "missing field");
    }
    return *it;
}

double number(const Json &j, const std::string &path) {
    if (!j.is_number()) {
        throw ConfigError(path, "expected a number");
    }
    return j.get<double>();
}

std::int64_t integer(const Json &j, const std::string &path) {
    if (!j.is_number_integer()) {
        throw ConfigError(path, "expected an integer");
    }
    return j.get<std::int64_t>();
}

CommitBit bit(const Json &j, const std::string &path) {
    auto v = integer(j, path);
    if (v != 0 && v != 1) {
        throw ConfigError(path, "expected 0 or 1");
    }
    return static_cast<CommitBit>(v);
}

std::string kind_of(const Json &j, const std::string &path) {
    if (j.is_string()) {
        return j.get<std::string>();
    }
    const Json &k = field(j, "kind", path);
    if (!k.is_string()) {
        throw ConfigError(path + ".kind", "expected a string");
    }
    return k.get<std::string>();
}

void reject_unknown(const Json &j, std::initializer_list<const char *> allowed, const std::string &path) {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!ok.contains(it.key())) {
            throw ConfigError(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
        }
    }
}

Json optional_json(const auto &opt, auto &&convert) {
    return opt ? convert(*opt) : Json(nullptr);
}

Json to_json_int(std::optional<int> v) {
    return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json to_json(Complex z) {
    return Json::array({z.real() + 0.0, z.imag() + 0.0});
}

Json to_json(const Vector2 &v) {
    return Json::array({to_json(v.a0), to_json(v.a1)});
}

Json to_json(const Matrix2 &m) {
    return Json::array({Json::array({to_json(m(0, 0)), to_json(m(0, 1))}),
                        Json::array({to_json(m(1, 0)), to_json(m(1, 1))})});
}

Json to_json(const PureState4 &s) {
    Json out = Json::array();
    for (int i = 0; i < 4; i++) {
        out.push_back(to_json(s[i]));
    }
    return out;
}

Json to_json(const OperatorQuadruple &q) {
    return Json{{"M", to_json(q.M.matrix())},
                {"N", to_json(q.N.matrix())},
                {"J", to_json(q.J.matrix())},
                {"K", to_json(q.K.matrix())}};
}

Json to_json(const StateSource &s) {
    Json out{{"type", to_string(s.kind)}};
    if (s.kind == StateSourceKind::subcircle_discretized) {
        out["k"] = s.k;
    }
    return out;
}

Json to_json(const CoefficientMatrix &S) {
    return to_json(S.matrix());
}

Json to_json(const AliceStrategy &s) {
    return std::visit(Overloaded{
                          [](const HonestAlice &) { return Json{{"kind", "honest"}}; },
                          [](const DelayedAlice &d) {
                              return Json{{"kind", "delayed"},
                                          {"S", to_json(d.S)},
                                          {"declared", to_int(d.declared)},
                                          {"actual", to_int(d.actual)}};
                          },
                          [](const PerStateOptimalAlice &o) {
                              return Json{{"kind", "per_state_optimal"},
                                          {"declared", to_int(o.declared)},
                                          {"actual", to_int(o.actual)}};
                          },
                      },
                      s);
}

Json to_json(const TtpStrategy &s) {
    return std::visit(Overloaded{
                          [](const HonestTtp &) { return Json{{"kind", "honest"}}; },
                          [](const WrongBasisTtp &w) { return Json{{"kind", "wrong_basis"}, {"p", w.p}}; },
                          [](const BiasedStateTtp &b) {
                              return Json{{"kind", "biased_state"}, {"psi", to_json(b.psi.vec())}};
                          },
                      },
                      s);
}

Json to_json(const BobStrategy &s) {
    return std::visit(Overloaded{
                          [](const HonestBob &) { return Json{{"kind", "honest"}}; },
                          [](const ProbeBob &p) { return Json{{"kind", "probe"}, {"psi", to_json(p.psi.vec())}}; },
                          [](const EntangledProbeBob &e) {
                              return Json{{"kind", "entangled_probe"}, {"state", to_json(e.state)}};
                          },
                      },
                      s);
}

Json to_json(const ProtocolConfig &c) {
    return Json{{"rounds", c.rounds},
                {"seed", c.seed},
                {"tolerance", c.tolerance},
                {"basis_source", to_json(c.basis_source)},
                {"quadruple", to_json(c.quadruple)}};
}

Json to_json(const Transcript &t) {
    Json rounds = Json::array();
    for (const auto &r : t.rounds) {
        auto vec = [](const UnitVector2 &v) { return to_json(v.vec()); };
        auto basis = [](const BasisMeasurement &b) { return to_json(b.phi().vec()); };
        auto label = [](OperatorLabel l) { return Json(std::string(to_string(l))); };
        Json rec{
            {"index", r.index},
            {"origin", to_string(r.origin)},
            {"ttp_basis", basis(r.ttp_basis)},
            {"ttp_outcome", r.ttp_outcome},
            {"alice_state", optional_json(r.alice_state, vec)},
            {"alice_operator", optional_json(r.alice_operator, label)},
            {"sent_state", optional_json(r.sent_state, vec)},
        };
        if (r.sent_joint_state) {
            rec["sent_joint_state"] = to_json(*r.sent_joint_state);
        }
        rec["bob_guess"] = to_json_int(r.bob_guess);
        rec["announced_operator"] = optional_json(r.announced_operator, label);
        rec["announced_basis"] = optional_json(r.announced_basis, basis);
        rec["announced_outcome"] = to_json_int(r.announced_outcome);
        rec["bob_outcome"] = to_json_int(r.bob_outcome);
        rec["verified"] = r.verified ? Json(*r.verified) : Json(nullptr);
        rec["flags"] = r.flags;
        rounds.push_back(std::move(rec));
    }
    Json phases = Json::array();
    for (auto p : t.phase_log) {
        phases.push_back(to_string(p));
    }
    Json verdict{{"kind", to_string(t.verdict.kind)},
                 {"first_failed_round",
                  t.verdict.first_failed_round ? Json(*t.verdict.first_failed_round) : Json(nullptr)}};
    if (!t.verdict.reason.empty()) {
        verdict["reason"] = t.verdict.reason;
    }
    return Json{{"config", to_json(t.config)},
                {"committed_bit", to_int(t.committed_bit)},
                {"strategies", {{"alice", to_json(t.alice)}, {"ttp", to_json(t.ttp)}, {"bob", to_json(t.bob)}}},
                {"phase_log", phases},
                {"rounds", rounds},
                {"verdict", verdict}};
}

Json to_json(const TranscriptSummary &s) {
    Json out{{"verdict", s.verdict},
             {"first_failed_round", s.first_failed_round ? Json(*s.first_failed_round) : Json(nullptr)},
             {"rounds", s.rounds},
             {"verified_rounds", s.verified_rounds},
             {"pass_rate", s.pass_rate},
             {"detection_rate", s.detection_rate}};
    if (s.bob_guess_accuracy) {
        out["bob_guess_accuracy"] = *s.bob_guess_accuracy;
    }
    return out;
}

Json to_json(const ConcealmentReport &r) {
    return Json{{"residual1", r.residual1},
                {"residual2", r.residual2},
                {"residual3", r.residual3},
                {"tol", r.tol},
                {"passes", r.passes}};
}

Json to_json(const FidelityEstimate &e) {
    return Json{{"mean", e.mean}, {"stderr", e.std_error}, {"samples", e.samples}, {"sampler", to_json(e.sampler)}};
}

Json to_json(const AttackSynthesis &a) {
    return Json{{"S", to_json(a.S)},
                {"S_aligned", to_json(align_left_phases(a.S))},
                {"branch", to_string(a.branch)},
                {"residual_j", a.residual_j},
                {"residual_k", a.residual_k},
                {"unitarity", a.unitarity}};
}

Complex complex_from_json(const Json &j, const std::string &path) {
    if (!j.is_array() || j.size() != 2) {
        throw ConfigError(path, "expected a complex number [re, im]");
    }
    Complex z{number(j[0], path + "[0]"), number(j[1], path + "[1]")};
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw ConfigError(path, "non-finite complex number");
    }
    return z;
}

Vector2 vector_from_json(const Json &j, const std::string &path) {
    if (!j.is_array() || j.size() != 2) {
        throw ConfigError(path, "expected a qubit state [[re, im], [re, im]]");
    }
    return {complex_from_json(j[0], path + "[0]"), complex_from_json(j[1], path + "[1]")};
}

UnitVector2 unit_vector_from_json(const Json &j, const std::string &path) {
    Vector2 v = vector_from_json(j, path);
    try {
        return UnitVector2(v);
    } catch (const ValidationError &e) {
        throw ValidationError(path + ": " + e.what());
    }
}

Matrix2 matrix_from_json(const Json &j, const std::string &path) {
    if (!j.is_array() || j.size() != 2) {
        throw ConfigError(path, "expected a 2x2 matrix (two rows)");
    }
    Matrix2 m;
    for (int r = 0; r < 2; r++) {
        const Json &row = j[r];
        std::string row_path = path + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.size() != 2) {
            throw ConfigError(row_path, "expected a row of two complex entries");
        }
        for (int c = 0; c < 2; c++) {
            m(r, c) = complex_from_json(row[c], row_path + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

PureState4 state4_from_json(const Json &j, const std::string &path) {
    if (!j.is_array() || j.size() != 4) {
        throw ConfigError(path, "expected four complex amplitudes");
    }
    PureState4::Amplitudes amps;
    for (int i = 0; i < 4; i++) {
        amps[i] = complex_from_json(j[i], path + "[" + std::to_string(i) + "]");
    }
    try {
        return PureState4(amps);
    } catch (const ValidationError &e) {
        throw ValidationError(path + ": " + e.what());
    }
}

std::array<Matrix2, 4> raw_quadruple_from_json(const Json &j, const std::string &path) {
    if (j.is_string()) {
        if (j.get<std::string>() != "reference") {
            throw ConfigError(path, "expected \"reference\" or an object with M, N, J, K");
        }
        auto q = paper_quadruple();
        return {q.M.matrix(), q.N.matrix(), q.J.matrix(), q.K.matrix()};
    }
    if (!j.is_object()) {
        throw ConfigError(path, "expected \"reference\" or an object with M, N, J, K");
    }
    reject_unknown(j, {"M", "N", "J", "K"}, path);
    return {matrix_from_json(field(j, "M", path), path + ".M"), matrix_from_json(field(j, "N", path), path + ".N"),
            matrix_from_json(field(j, "J", path), path + ".J"), matrix_from_json(field(j, "K", path), path + ".K")};
}

OperatorQuadruple quadruple_from_json(const Json &j, const std::string &path) {
    auto raw = raw_quadruple_from_json(j, path);
    const char *names[] = {"M", "N", "J", "K"};
    auto admit = [&](int i) {
        try {
            return Unitary2(raw[i]);
        } catch (const ValidationError &e) {
            throw ValidationError(path + "." + names[i] + ": " + e.what());
        }
    };
    return {admit(0), admit(1), admit(2), admit(3)};
}

StateSource state_source_from_json(const Json &j, const std::string &path) {
    std::string type = j.is_string() ? j.get<std::string>() : [&] {
        const Json &t = field(j, "type", path);
        if (!t.is_string()) {
            throw ConfigError(path + ".type", "expected a string");
        }
        return t.get<std::string>();
    }();
    StateSource s;
    if (type == "full_bloch" || type == "bloch") {
        s = StateSource::full_bloch();
    } else if (type == "subcircle_continuous" || type == "subcircle") {
        s = StateSource::subcircle();
    } else if (type == "subcircle_discretized") {
        int k = 8;
        if (j.is_object() && j.contains("k")) {
            k = static_cast<int>(integer(j["k"], path + ".k"));
        }
        if (k < 2) {
            throw ConfigError(path + ".k", "need k >= 2");
        }
        s = StateSource::subcircle_points(k);
    } else {
        throw ConfigError(path + ".type", "unknown basis source '" + type + "'");
    }
    return s;
}

StateSource parse_sampler(std::string_view text) {
    if (text == "bloch") {
        return StateSource::full_bloch();
    }
    if (text == "subcircle") {
        return StateSource::subcircle();
    }
    constexpr std::string_view prefix = "subcircle-k:";
    if (text.starts_with(prefix)) {
        auto digits = text.substr(prefix.size());
        int k = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (ec == std::errc() && ptr == digits.data() + digits.size() && k >= 2) {
            return StateSource::subcircle_points(k);
        }
    }
    throw ConfigError("--sampler", "expected bloch, subcircle or subcircle-k:K with K >= 2");
}

AliceStrategy alice_from_json(const Json &j, const std::string &path) {
    std::string kind = kind_of(j, path);
    if (kind == "honest") {
        return HonestAlice{};
    }
    if (kind == "delayed") {
        reject_unknown(j, {"kind", "S", "declared", "actual"}, path);
        DelayedAlice d;
        d.S = CoefficientMatrix::from(matrix_from_json(field(j, "S", path), path + ".S"));
        double res = d.S.unitarity_residual();
        if (res > kUnitarityTol) {
            throw ValidationError(path + ".S: attack matrix is not unitary (residual " + std::to_string(res) + ")");
        }
        d.declared = bit(field(j, "declared", path), path + ".declared");
        d.actual = bit(field(j, "actual", path), path + ".actual");
        return d;
    }
    if (kind == "per_state_optimal") {
        reject_unknown(j, {"kind", "declared", "actual"}, path);
        return PerStateOptimalAlice{bit(field(j, "declared", path), path + ".declared"),
                                    bit(field(j, "actual", path), path + ".actual")};
    }
    throw ConfigError(path + ".kind", "unknown Alice strategy '" + kind + "'");
}

TtpStrategy ttp_from_json(const Json &j, const std::string &path) {
    std::string kind = kind_of(j, path);
    if (kind == "honest") {
        return HonestTtp{};
    }
    if (kind == "wrong_basis") {
        reject_unknown(j, {"kind", "p"}, path);
        double p = number(field(j, "p", path), path + ".p");
        if (!(p >= 0 && p <= 1)) {
            throw ConfigError(path + ".p", "probability must lie in [0, 1]");
        }
        return WrongBasisTtp{p};
    }
    if (kind == "biased_state") {
        reject_unknown(j, {"kind", "psi"}, path);
        return BiasedStateTtp{unit_vector_from_json(field(j, "psi", path), path + ".psi")};
    }
    throw ConfigError(path + ".kind", "unknown TTP strategy '" + kind + "'");
}

BobStrategy bob_from_json(const Json &j, const std::string &path) {
    std::string kind = kind_of(j, path);
    if (kind == "honest") {
        return HonestBob{};
    }
    if (kind == "probe") {
        reject_unknown(j, {"kind", "psi"}, path);
        return ProbeBob{unit_vector_from_json(field(j, "psi", path), path + ".psi")};
    }
    if (kind == "entangled_probe") {
        reject_unknown(j, {"kind", "state"}, path);
        return EntangledProbeBob{state4_from_json(field(j, "state", path), path + ".state")};
    }
    throw ConfigError(path + ".kind", "unknown Bob strategy '" + kind + "'");
}

RunConfig run_config_from_json(const Json &j) {
    if (!j.is_object()) {
        throw ConfigError("$", "config must be a JSON object");
    }
    reject_unknown(j, {"rounds", "seed", "basis_source", "quadruple", "tolerance", "chi", "alice", "ttp", "bob"},
                   "");
    RunConfig rc;
    rc.protocol.rounds = integer(field(j, "rounds", "$"), "rounds");
    if (rc.protocol.rounds < 1) {
        throw ConfigError("rounds", "must be >= 1");
    }
    const Json &seed = field(j, "seed", "$");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
        throw ConfigError("seed", "expected a non-negative integer");
    }
    rc.protocol.seed = seed.get<std::uint64_t>();
    if (j.contains("basis_source")) {
        rc.protocol.basis_source = state_source_from_json(j["basis_source"], "basis_source");
    }
    if (j.contains("quadruple")) {
        rc.protocol.quadruple = quadruple_from_json(j["quadruple"], "quadruple");
    }
    if (j.contains("tolerance")) {
        rc.protocol.tolerance = number(j["tolerance"], "tolerance");
        if (!(rc.protocol.tolerance > 0)) {
            throw ConfigError("tolerance", "must be positive");
        }
    }
    rc.alice = j.contains("alice") ? alice_from_json(j["alice"], "alice") : AliceStrategy{HonestAlice{}};
    rc.ttp = j.contains("ttp") ? ttp_from_json(j["ttp"], "ttp") : TtpStrategy{HonestTtp{}};
    rc.bob = j.contains("bob") ? bob_from_json(j["bob"], "bob") : BobStrategy{HonestBob{}};
    if (j.contains("chi")) {
        rc.chi = bit(j["chi"], "chi");
        if (!std::holds_alternative<HonestAlice>(rc.alice) && committed_bit(rc.alice, rc.chi) != rc.chi) {
            throw ConfigError("alice.actual", "conflicts with chi");
        }
    } else {
        rc.chi = committed_bit(rc.alice, CommitBit::zero);
    }
    return rc;
}

TranscriptSummary summary_from_transcript_json(const Json &t) {
    TranscriptSummary s;
    const Json &verdict = field(t, "verdict", "$");
    s.verdict = field(verdict, "kind", "verdict").get<std::string>();
    const Json &first = field(verdict, "first_failed_round", "verdict");
    if (!first.is_null()) {
        s.first_failed_round = first.get<std::int64_t>();
    }
    const int committed = static_cast<int>(integer(field(t, "committed_bit", "$"), "committed_bit"));
    const Json &rounds = field(t, "rounds", "$");
    s.rounds = static_cast<std::int64_t>(rounds.size());
    std::int64_t checked = 0;
    std::int64_t guesses = 0;
    std::int64_t correct = 0;
    for (const auto &r : rounds) {
        if (r.contains("verified") && !r["verified"].is_null()) {
            checked++;
            s.verified_rounds += r["verified"].get<bool>() ? 1 : 0;
        }
        if (r.contains("bob_guess") && !r["bob_guess"].is_null()) {
            guesses++;
            correct += r["bob_guess"].get<int>() == committed ? 1 : 0;
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

}  // namespace nsqbc
