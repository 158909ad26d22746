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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nsqbc/qmath.h"
#include "nsqbc/state_source.h"
#include "nsqbc/strategies.h"

namespace nsqbc {

struct ProtocolConfig {
    /// Number of rounds; each uses a fresh singlet.
    std::int64_t rounds = 1;
    OperatorQuadruple quadruple = paper_quadruple();
    StateSource basis_source = StateSource::subcircle_points(8);
    std::uint64_t seed = 0;
    double tolerance = kUnitarityTol;

    /// Throws ValidationError when rounds < 1 or the basis source is invalid.
    void validate() const;
};

/// Result of the pre-commitment step for one round.
struct PrecommitRecord {
    BasisMeasurement ttp_basis;
    int ttp_outcome;
    /// Alice's collapsed qubit; orthogonal to ttp_basis.result(ttp_outcome).
    UnitVector2 alice_state;
};

/// TTP samples a basis and measures its half of a fresh singlet.
PrecommitRecord precommit_round(const StateSource &source, Rng &rng);
/// All rounds, round i drawing from Rng::substream(config.seed, protocol_round, i).
std::vector<PrecommitRecord> precommit(const ProtocolConfig &config);

struct HonestCommit {
    OperatorLabel label;
    UnitVector2 sent_state;
};

/// Picks one of the two chi-operators uniformly and applies it.
HonestCommit commit_honest(CommitBit chi, const UnitVector2 &alice_state, const OperatorQuadruple &quadruple,
                           Rng &rng);

/// (|0> (x) Op1|psi> + |1> (x) Op2|psi>) / sqrt(2), with (Op1, Op2) the chi-operators.
PureState4 commit_purified(CommitBit chi, const UnitVector2 &alice_state, const OperatorQuadruple &quadruple);

/// Bob undoes the announced operator, measures in the announced basis and
/// accepts iff his outcome is opposite to the announced TTP outcome.
bool unveil_verify(const UnitVector2 &received, OperatorLabel announced, const BasisMeasurement &basis,
                   int ttp_outcome, const OperatorQuadruple &quadruple, Rng &rng);
/// Same, with the announcement still in text form; unknown labels throw ProtocolAbort.
bool unveil_verify(const UnitVector2 &received, std::string_view announced, const BasisMeasurement &basis,
                   int ttp_outcome, const OperatorQuadruple &quadruple, Rng &rng);

enum class Phase { pre_commitment, commitment, holding, unveiling };
const char *to_string(Phase phase);

/// Who prepared the state Alice encodes into.
enum class StateOrigin { ttp_singlet, ttp_fabricated, bob_probe, bob_entangled_probe };
const char *to_string(StateOrigin origin);

struct RoundRecord {
    std::int64_t index = 0;
    StateOrigin origin = StateOrigin::ttp_singlet;
    BasisMeasurement ttp_basis = BasisMeasurement::computational();
    int ttp_outcome = 0;
    /// Empty only when Alice holds half of Bob's entangled probe.
    std::optional<UnitVector2> alice_state;
    /// Operator Alice physically applied; empty when she kept the choice purified.
    std::optional<OperatorLabel> alice_operator;
    /// Qubit Bob verifies. For purified strategies it is fixed by Alice's
    /// ancilla measurement during the unveiling phase.
    std::optional<UnitVector2> sent_state;
    /// Joint (data, Bob's reference) state for entangled probes.
    std::optional<PureState4> sent_joint_state;
    /// Bob's pre-unveiling guess of chi (probe strategies only).
    std::optional<int> bob_guess;

    // Populated in the unveiling phase only.
    std::optional<OperatorLabel> announced_operator;
    std::optional<BasisMeasurement> announced_basis;
    std::optional<int> announced_outcome;
    std::optional<int> bob_outcome;
    std::optional<bool> verified;

    std::vector<std::string> flags;
};

struct Verdict {
    enum class Kind { accept, reject, abort };
    Kind kind = Kind::accept;
    std::optional<std::int64_t> first_failed_round;
    std::string reason;
};
const char *to_string(Verdict::Kind kind);

struct Transcript {
    ProtocolConfig config;
    CommitBit committed_bit = CommitBit::zero;
    AliceStrategy alice;
    TtpStrategy ttp;
    BobStrategy bob;
    std::vector<RoundRecord> rounds;
    std::vector<Phase> phase_log;
    Verdict verdict;
};

/// Called right after a phase marker is appended, before that phase runs.
using PhaseObserver = std::function<void(Phase, const Transcript &)>;

/// Runs pre-commitment, commitment, holding and unveiling for all rounds.
/// Round i draws every random choice from Rng::substream(config.seed,
/// protocol_round, i), so transcripts are reproducible per seed. Strategy
/// errors end the run with an abort verdict rather than an exception.
Transcript run_protocol(const ProtocolConfig &config, CommitBit chi, const AliceStrategy &alice,
                        const TtpStrategy &ttp, const BobStrategy &bob, const PhaseObserver &observer = {});

struct TranscriptSummary {
    std::string verdict;
    std::optional<std::int64_t> first_failed_round;
    std::int64_t rounds = 0;
    std::int64_t verified_rounds = 0;
    double pass_rate = 0;
    double detection_rate = 0;
    std::optional<double> bob_guess_accuracy;
};

TranscriptSummary summarize(const Transcript &t);

}  // namespace nsqbc
