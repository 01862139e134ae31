// Copyright 2026 The qpc Authors
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

#ifndef QPC_ADVERSARY_H
#define QPC_ADVERSARY_H

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qpc/protocol.h"

namespace qpc {

/// Invalid run configuration; `field` is a dotted JSON path.
class ConfigError : public std::invalid_argument {
   public:
    ConfigError(std::string field, const std::string &message);
    const std::string &field() const {
        return field_;
    }

   private:
    std::string field_;
};

enum class AdversaryKind { kHonest, kFakeReveal, kDelayedReveal, kRemoteReveal, kEavesdropIntercept };

/// "HONEST", "FAKE_REVEAL", "DELAYED_REVEAL", "REMOTE_REVEAL", "EAVESDROP_INTERCEPT".
std::string to_string(AdversaryKind kind);
std::optional<AdversaryKind> parse_adversary_kind(std::string_view text);

/// The only channel the eavesdropper can sit on.
inline constexpr const char *kAliceToCharlieChannel = "A->C";

struct AdversarySpec {
    AdversaryKind kind = AdversaryKind::kHonest;

    // FAKE_REVEAL. Empty guesses are drawn uniformly over {I, X, Z, ZX}.
    std::optional<CommitmentValue> announced;
    std::vector<PauliLabel> pauli_guesses;

    // DELAYED_REVEAL
    std::optional<double> delay_s;

    // REMOTE_REVEAL
    std::optional<double> true_position_m;

    // EAVESDROP_INTERCEPT
    std::optional<std::string> channel;
    double intercept_probability = 1;

    /// Fails with ConfigError when a parameter is missing, out of range, or
    /// given for the wrong kind.
    void validate() const;

    nlohmann::ordered_json to_json() const;
    /// Parses and validates.
    static AdversarySpec from_json(const nlohmann::ordered_json &j);

    bool operator==(const AdversarySpec &) const = default;
};

/// Commits honestly to the run's value, applies `pauli_guesses` (or uniform
/// draws) to the retained halves, and announces encode_commitment(announced).
class FakeRevealAlice : public AliceBehavior {
   public:
    FakeRevealAlice(CommitmentValue announced, std::vector<PauliLabel> pauli_guesses);

    std::vector<PauliLabel> retained_paulis(const AliceView &view, RandomStream &alice_rng) override;
    std::vector<BellLabel> announced_labels(const AliceView &view) override;

   private:
    CommitmentValue announced_;
    std::vector<PauliLabel> pauli_guesses_;
};

/// Sends every reveal-phase message `delay_s` late.
class DelayedRevealAlice : public AliceBehavior {
   public:
    explicit DelayedRevealAlice(double delay_s);
    double reveal_delay_s(const AliceView &view) override;

   private:
    double delay_s_;
};

/// Commits from the announced position but reveals from `true_position`.
class RemoteRevealAlice : public AliceBehavior {
   public:
    explicit RemoteRevealAlice(Position1D true_position);
    Position1D reveal_origin(const AliceView &view) override;

   private:
    Position1D true_position_;
};

/// Measures each A->C qubit in the computational basis with the given
/// probability and forwards the observed state.
class InterceptResend : public ChannelTap {
   public:
    explicit InterceptResend(double probability);
    bool intercepts(size_t index, RandomStream &eve_rng) override;

   private:
    double probability_;
};

std::unique_ptr<AliceBehavior> fake_reveal_strategy(CommitmentValue announced, std::vector<PauliLabel> pauli_guesses);
std::unique_ptr<AliceBehavior> delayed_reveal_strategy(double delay_s);
std::unique_ptr<AliceBehavior> remote_reveal_strategy(Position1D true_position);
/// Fails with std::invalid_argument for any channel other than "A->C".
std::unique_ptr<ChannelTap> intercept_resend_eavesdropper(const std::string &channel, double probability = 1);

/// Handlers for one run: Alice (honest unless replaced) and an optional tap.
struct Adversary {
    std::unique_ptr<AliceBehavior> alice;
    std::unique_ptr<ChannelTap> tap;
};

Adversary make_adversary(const AdversarySpec &spec);

}  // namespace qpc

#endif
