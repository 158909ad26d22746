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
#include <string>
#include <string_view>

#include "json.hpp"
#include "nsqbc/adversary.h"
#include "nsqbc/analysis.h"
#include "nsqbc/protocol.h"

namespace nsqbc {

// Wire formats. A complex number is [re, im]; a qubit state is
// [[re, im], [re, im]]; a 2x2 matrix is two rows of two complex entries; a
// two-qubit state is four complex entries in |00>,|01>,|10>,|11> order.
// Readers throw ConfigError(path) for malformed documents and ValidationError
// for well-formed but numerically inadmissible values.

using Json = nlohmann::ordered_json;

Json to_json(Complex z);
Json to_json(const Vector2 &v);
Json to_json(const Matrix2 &m);
Json to_json(const PureState4 &s);
Json to_json(const OperatorQuadruple &q);
Json to_json(const StateSource &s);
Json to_json(const CoefficientMatrix &S);
Json to_json(const AliceStrategy &s);
Json to_json(const TtpStrategy &s);
Json to_json(const BobStrategy &s);
Json to_json(const ProtocolConfig &c);
Json to_json(const Transcript &t);
Json to_json(const TranscriptSummary &s);
Json to_json(const ConcealmentReport &r);
Json to_json(const FidelityEstimate &e);
Json to_json(const AttackSynthesis &a);

Complex complex_from_json(const Json &j, const std::string &path);
Vector2 vector_from_json(const Json &j, const std::string &path);
UnitVector2 unit_vector_from_json(const Json &j, const std::string &path);
Matrix2 matrix_from_json(const Json &j, const std::string &path);
PureState4 state4_from_json(const Json &j, const std::string &path);

/// The four matrices before the unitarity admission check, in M, N, J, K order.
std::array<Matrix2, 4> raw_quadruple_from_json(const Json &j, const std::string &path);
/// "reference" for paper_quadruple(), or an object with M, N, J, K.
OperatorQuadruple quadruple_from_json(const Json &j, const std::string &path);

/// {"type": "full_bloch" | "subcircle_continuous" | "subcircle_discretized", "k": K}
StateSource state_source_from_json(const Json &j, const std::string &path);
/// Command-line sampler spelling: bloch, subcircle, subcircle-k:K.
StateSource parse_sampler(std::string_view text);

AliceStrategy alice_from_json(const Json &j, const std::string &path);
TtpStrategy ttp_from_json(const Json &j, const std::string &path);
BobStrategy bob_from_json(const Json &j, const std::string &path);

/// Everything a simulate run needs.
struct RunConfig {
    ProtocolConfig protocol;
    CommitBit chi = CommitBit::zero;
    AliceStrategy alice;
    TtpStrategy ttp;
    BobStrategy bob;
};

/// Fields: rounds, seed (mandatory), basis_source, quadruple, tolerance,
/// chi, alice, ttp, bob. Unknown top-level fields are rejected.
RunConfig run_config_from_json(const Json &j);

/// Recomputes the run summary from a serialized transcript alone.
TranscriptSummary summary_from_transcript_json(const Json &transcript);

}  // namespace nsqbc
