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

#include "qpc/adversary.h"

#include <cmath>

namespace qpc {

namespace {

// Everything a strategy hook sees must belong to Alice.
template <typename Tuple, size_t... I>
constexpr bool all_owned_by_alice(std::index_sequence<I...>) {
    return ((std::remove_cvref_t<std::tuple_element_t<I, Tuple>>::owner == Party::kAlice) && ...);
}
using AliceViewFields = decltype(std::declval<const AliceView &>().tie());
static_assert(all_owned_by_alice<AliceViewFields>(std::make_index_sequence<std::tuple_size_v<AliceViewFields>>()));

[[noreturn]] void field_error(const std::string &field, const std::string &message) {
    throw ConfigError(field.empty() ? "adversary" : "adversary." + field, message);
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string &message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {
}

std::string to_string(AdversaryKind kind) {
    switch (kind) {
        case AdversaryKind::kHonest:
            return "HONEST";
        case AdversaryKind::kFakeReveal:
            return "FAKE_REVEAL";
        case AdversaryKind::kDelayedReveal:
            return "DELAYED_REVEAL";
        case AdversaryKind::kRemoteReveal:
            return "REMOTE_REVEAL";
        case AdversaryKind::kEavesdropIntercept:
            return "EAVESDROP_INTERCEPT";
    }
    throw std::logic_error("bad AdversaryKind");
}

std::optional<AdversaryKind> parse_adversary_kind(std::string_view text) {
    for (auto k : {AdversaryKind::kHonest, AdversaryKind::kFakeReveal, AdversaryKind::kDelayedReveal,
                   AdversaryKind::kRemoteReveal, AdversaryKind::kEavesdropIntercept}) {
        if (text == to_string(k)) {
            return k;
        }
    }
    return std::nullopt;
}

void AdversarySpec::validate() const {
    bool fake = kind == AdversaryKind::kFakeReveal;
    bool delayed = kind == AdversaryKind::kDelayedReveal;
    bool remote = kind == AdversaryKind::kRemoteReveal;
    bool eve = kind == AdversaryKind::kEavesdropIntercept;

    if (fake != announced.has_value()) {
        field_error("announced", fake ? "required for FAKE_REVEAL" : "only allowed for FAKE_REVEAL");
    }
    if (!fake && !pauli_guesses.empty()) {
        field_error("pauli_guesses", "only allowed for FAKE_REVEAL");
    }
    if (delayed != delay_s.has_value()) {
        field_error("delay_s", delayed ? "required for DELAYED_REVEAL" : "only allowed for DELAYED_REVEAL");
    }
    if (delay_s && !(std::isfinite(*delay_s) && *delay_s >= 0)) {
        field_error("delay_s", "must be finite and >= 0");
    }
    if (remote != true_position_m.has_value()) {
        field_error("true_position_m", remote ? "required for REMOTE_REVEAL" : "only allowed for REMOTE_REVEAL");
    }
    if (true_position_m && !std::isfinite(*true_position_m)) {
        field_error("true_position_m", "must be finite");
    }
    if (eve != channel.has_value()) {
        field_error("channel", eve ? "required for EAVESDROP_INTERCEPT" : "only allowed for EAVESDROP_INTERCEPT");
    }
    if (channel && *channel != kAliceToCharlieChannel) {
        field_error("channel", "only \"" + std::string(kAliceToCharlieChannel) + "\" can be intercepted");
    }
    if (!(intercept_probability >= 0 && intercept_probability <= 1)) {
        field_error("intercept_probability", "must be in [0, 1]");
    }
    if (!eve && intercept_probability != 1) {
        field_error("intercept_probability", "only allowed for EAVESDROP_INTERCEPT");
    }
}

nlohmann::ordered_json AdversarySpec::to_json() const {
    nlohmann::ordered_json out;
    out["kind"] = to_string(kind);
    if (announced) {
        out["announced"] = to_string(*announced);
    }
    if (!pauli_guesses.empty()) {
        auto guesses = nlohmann::ordered_json::array();
        for (auto p : pauli_guesses) {
            guesses.push_back(p.str());
        }
        out["pauli_guesses"] = guesses;
    }
    if (delay_s) {
        out["delay_s"] = *delay_s;
    }
    if (true_position_m) {
        out["true_position_m"] = *true_position_m;
    }
    if (channel) {
        out["channel"] = *channel;
        out["intercept_probability"] = intercept_probability;
    }
    return out;
}

AdversarySpec AdversarySpec::from_json(const nlohmann::ordered_json &j) {
    if (!j.is_object()) {
        field_error("", "must be an object");
    }
    AdversarySpec spec;
    for (const auto &[key, value] : j.items()) {
        if (key == "kind") {
            auto kind = value.is_string() ? parse_adversary_kind(value.get<std::string>()) : std::nullopt;
            if (!kind) {
                field_error("kind", "unknown adversary kind " + value.dump());
            }
            spec.kind = *kind;
        } else if (key == "announced") {
            auto v = value.is_string() ? parse_commitment(value.get<std::string>()) : std::nullopt;
            if (!v) {
                field_error("announced", "unknown commitment value " + value.dump());
            }
            spec.announced = *v;
        } else if (key == "pauli_guesses") {
            if (!value.is_array()) {
                field_error("pauli_guesses", "must be an array");
            }
            for (const auto &item : value) {
                auto p = item.is_string() ? PauliLabel::parse(item.get<std::string>()) : std::nullopt;
                if (!p) {
                    field_error("pauli_guesses", "unknown Pauli " + item.dump());
                }
                spec.pauli_guesses.push_back(*p);
            }
        } else if (key == "delay_s") {
            if (!value.is_number()) {
                field_error("delay_s", "must be a number");
            }
            spec.delay_s = value.get<double>();
        } else if (key == "true_position_m") {
            if (!value.is_number()) {
                field_error("true_position_m", "must be a number");
            }
            spec.true_position_m = value.get<double>();
        } else if (key == "channel") {
            if (!value.is_string()) {
                field_error("channel", "must be a string");
            }
            spec.channel = value.get<std::string>();
        } else if (key == "intercept_probability") {
            if (!value.is_number()) {
                field_error("intercept_probability", "must be a number");
            }
            spec.intercept_probability = value.get<double>();
        } else {
            field_error(key, "unknown field");
        }
    }
    if (!j.contains("kind")) {
        field_error("kind", "required");
    }
    spec.validate();
    return spec;
}

FakeRevealAlice::FakeRevealAlice(CommitmentValue announced, std::vector<PauliLabel> pauli_guesses)
    : announced_(announced), pauli_guesses_(std::move(pauli_guesses)) {
}

std::vector<PauliLabel> FakeRevealAlice::retained_paulis(const AliceView &view, RandomStream &alice_rng) {
    size_t n = view.committed_labels.get().size();
    if (!pauli_guesses_.empty()) {
        if (pauli_guesses_.size() != n) {
            throw std::invalid_argument(
                "adversary.pauli_guesses: " + std::to_string(pauli_guesses_.size()) + " guesses for " +
                std::to_string(n) + " pairs");
        }
        return pauli_guesses_;
    }
    std::vector<PauliLabel> guesses;
    for (size_t k = 0; k < n; k++) {
        guesses.push_back(PauliLabel::from_code(static_cast<uint8_t>(alice_rng.below(4))));
    }
    return guesses;
}

std::vector<BellLabel> FakeRevealAlice::announced_labels(const AliceView &view) {
    return std::vector<BellLabel>(view.committed_labels.get().size(), encode_commitment(announced_));
}

DelayedRevealAlice::DelayedRevealAlice(double delay_s) : delay_s_(delay_s) {
}

double DelayedRevealAlice::reveal_delay_s(const AliceView &) {
    return delay_s_;
}

RemoteRevealAlice::RemoteRevealAlice(Position1D true_position) : true_position_(true_position) {
}

Position1D RemoteRevealAlice::reveal_origin(const AliceView &) {
    return true_position_;
}

InterceptResend::InterceptResend(double probability) : probability_(probability) {
}

bool InterceptResend::intercepts(size_t, RandomStream &eve_rng) {
    if (probability_ >= 1) {
        return true;
    }
    if (probability_ <= 0) {
        return false;
    }
    return eve_rng.uniform() < probability_;
}

std::unique_ptr<AliceBehavior> fake_reveal_strategy(CommitmentValue announced, std::vector<PauliLabel> pauli_guesses) {
    return std::make_unique<FakeRevealAlice>(announced, std::move(pauli_guesses));
}

std::unique_ptr<AliceBehavior> delayed_reveal_strategy(double delay_s) {
    if (!(std::isfinite(delay_s) && delay_s >= 0)) {
        throw std::invalid_argument("delay must be finite and >= 0");
    }
    return std::make_unique<DelayedRevealAlice>(delay_s);
}

std::unique_ptr<AliceBehavior> remote_reveal_strategy(Position1D true_position) {
    return std::make_unique<RemoteRevealAlice>(true_position);
}

std::unique_ptr<ChannelTap> intercept_resend_eavesdropper(const std::string &channel, double probability) {
    if (channel != kAliceToCharlieChannel) {
        throw std::invalid_argument("only the A->C qubit shipment can be intercepted, not " + channel);
    }
    if (!(probability >= 0 && probability <= 1)) {
        throw std::invalid_argument("intercept probability must be in [0, 1]");
    }
    return std::make_unique<InterceptResend>(probability);
}

Adversary make_adversary(const AdversarySpec &spec) {
    spec.validate();
    Adversary out;
    switch (spec.kind) {
        case AdversaryKind::kHonest:
            out.alice = std::make_unique<AliceBehavior>();
            break;
        case AdversaryKind::kFakeReveal:
            out.alice = fake_reveal_strategy(*spec.announced, spec.pauli_guesses);
            break;
        case AdversaryKind::kDelayedReveal:
            out.alice = delayed_reveal_strategy(*spec.delay_s);
            break;
        case AdversaryKind::kRemoteReveal:
            out.alice = remote_reveal_strategy(Position1D::at(*spec.true_position_m));
            break;
        case AdversaryKind::kEavesdropIntercept:
            out.alice = std::make_unique<AliceBehavior>();
            out.tap = intercept_resend_eavesdropper(*spec.channel, spec.intercept_probability);
            break;
    }
    return out;
}

}  // namespace qpc
