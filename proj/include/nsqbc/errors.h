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

#include <stdexcept>
#include <string>

namespace nsqbc {

/// A numerical admission check failed: a matrix is not unitary, a state is not
/// normalized, a density matrix is not positive, and so on.
class ValidationError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document. `field` names the offending JSON path.
class ConfigError : public std::runtime_error {
   public:
    ConfigError(std::string field, const std::string &message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {
    }
    const std::string &field() const noexcept {
        return field_;
    }

   private:
    std::string field_;
};

/// Protocol-level abort (bad announcement, unsupported strategy combination).
class ProtocolAbort : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class AttackErrorKind {
    degenerate_input,
    not_concealing,
    proportional_operators,
    non_unitary,
};

const char *to_string(AttackErrorKind kind);

class AttackError : public std::runtime_error {
   public:
    AttackError(AttackErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {
    }
    AttackErrorKind kind() const noexcept {
        return kind_;
    }

   private:
    AttackErrorKind kind_;
};

}  // namespace nsqbc
