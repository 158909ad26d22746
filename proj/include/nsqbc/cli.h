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
#include <iosfwd>
#include <string>
#include <vector>

#include "nsqbc/analysis.h"
#include "nsqbc/serialize.h"

namespace nsqbc {

inline constexpr const char *kToolVersion = "0.1.0";

struct RunManifest {
    std::string command;
    std::string config_digest;
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    std::vector<std::string> outputs;
};

Json to_json(const RunManifest &m);

/// Lowercase hex SHA-256 of `text`.
std::string sha256_hex(const std::string &text);

/// Digest of the compact dump of `config`.
std::string config_digest(const Json &config);

/// One row of the detection sweep.
struct DetectionPoint {
    std::int64_t rounds = 0;
    double analytic = 0;
    double empirical = 0;
    double std_error = 0;
    std::int64_t trials = 0;
    std::int64_t undetected = 0;
};

/// Runs `trials` independent delayed-Hadamard cheating runs of `rounds` rounds each, with bases drawn from the
/// full Bloch sphere. Trial t uses a protocol seed derived from (seed, t), so a point is reproducible on its own.
DetectionPoint detection_trials(std::int64_t rounds, std::int64_t trials, std::uint64_t seed);

/// One row of the fidelity sweep.
struct FidelityPoint {
    double abs_a = 0;
    double arg_ab = 0;
    CoefficientMatrix S;
    double closed_form = 0;
    FidelityEstimate mc;
};

/// The unitary [[a, b], [-conj(b), conj(a)]] with |a| = abs_a and arg(a conj(b)) = arg_ab.
CoefficientMatrix grid_coefficients(double abs_a, double arg_ab);

/// Grid: abs_a = cos(pi j / (2 (n_modulus - 1))), arg_ab = 2 pi k / n_phase.
std::vector<FidelityPoint> fidelity_grid(int n_modulus, int n_phase, const StateSource &sampler,
                                         std::int64_t samples, std::uint64_t seed);

/// Parses "lo:hi" (inclusive) or a comma list such as "1,5,10". Rejects empty ranges.
std::vector<std::int64_t> parse_round_range(const std::string &text);

/// Entry point. `args` excludes the program name. Returns the process exit code:
/// 0 success, 2 config error, 3 numerical validation error, 4 protocol-level abort.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace nsqbc
