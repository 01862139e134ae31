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

#include "qpc/protocol.h"

#include <algorithm>
#include <array>

namespace qpc {

namespace {

template <typename... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <typename... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::array<double, 4> kUniformBell = {0.25, 0.25, 0.25, 0.25};
constexpr std::array<double, 2> kUniformBit = {0.5, 0.5};

BellLabel draw_symbolic_bell(OutcomeSource<BellLabel> source) {
    if (source.is_forced()) {
        return source.outcome();
    }
    // Any Bell measurement on halves of two Bell pairs (or on a pure state and
    // half of a Bell pair) has uniform outcomes.
    return BellLabel::from_code(static_cast<uint8_t>(source.rng().sample_index(kUniformBell)));
}

class SymbolicPair final : public PairWorld {
   public:
    SymbolicPair(BellLabel alice_label, BellLabel bc_label) : ac_(alice_label), bc_(bc_label) {
    }

    void apply_pauli(PairSlot slot, PauliLabel p) override {
        if (alice_) {
            if (slot != PairSlot::kAliceHalf) {
                throw std::logic_error("Charlie's half is already measured");
            }
            alice_->residual = compose_paulis(alice_->residual, p);
        } else if (ab_) {
            if (slot != PairSlot::kAliceHalf) {
                throw std::logic_error("Charlie's half is already measured");
            }
            ab_ = apply_pauli_to_label(*ab_, p);
        } else {
            ac_ = apply_pauli_to_label(ac_, p);
        }
    }

    bool intercept_measure(RandomStream &) override {
        throw std::invalid_argument("intercept-resend breaks the Pauli frame; use oracle mode");
    }

    BellLabel charlie_bsm(OutcomeSource<BellLabel> source) override {
        if (ab_) {
            throw std::logic_error("Charlie already measured this pair");
        }
        BellLabel m = draw_symbolic_bell(source);
        ac_at_bsm_ = ac_;
        ab_ = swap_labels(ac_, bc_, m);
        swapped_ = ab_;
        return m;
    }

    void prepare_bob_input(bool bit, const BobUnitary &u) override {
        const auto *clifford = std::get_if<CliffordOp>(&u);
        if (clifford == nullptr) {
            throw std::invalid_argument("symbolic mode needs Clifford U_n");
        }
        input_bit_ = bit;
        input_clifford_ = *clifford;
        has_input_ = true;
    }

    BellLabel bob_bsm(OutcomeSource<BellLabel> source) override {
        if (!ab_ || !has_input_ || alice_) {
            throw std::logic_error("Bob's teleportation out of order");
        }
        BellLabel b = draw_symbolic_bell(source);
        alice_ = FrameQubit{teleport_correction(*ab_, b).as_pauli(), input_clifford_, input_bit_};
        return b;
    }

    Qubit take_alice_qubit() override {
        if (!alice_) {
            throw std::logic_error("Alice's qubit has not received the teleported state");
        }
        return *alice_;
    }

    std::optional<BellLabel> ac_label_at_bsm() const override {
        return ac_at_bsm_;
    }
    std::optional<BellLabel> swapped_label() const override {
        return swapped_;
    }

   private:

    BellLabel ac_;
    BellLabel bc_;
    std::optional<BellLabel> ac_at_bsm_;
    std::optional<BellLabel> ab_;
    std::optional<BellLabel> swapped_;
    bool has_input_ = false;
    bool input_bit_ = false;
    CliffordOp input_clifford_;
    std::optional<FrameQubit> alice_;
};

// Qubits: 0 = Alice's half, 1 = Charlie's half from Alice, 2 = Bob's half,
// 3 = Charlie's half from Bob, 4 = Bob's teleportation input.
class OraclePair final : public PairWorld {
   public:
    OraclePair(BellLabel alice_label, BellLabel bc_label)
        : state_(prepare_bell(alice_label).tensor(prepare_bell(bc_label)).tensor(StateVector::basis(1))) {
    }

    void apply_pauli(PairSlot slot, PauliLabel p) override {
        int qubit = slot == PairSlot::kAliceHalf ? kAlice : kCharlieA;
        if (qubit == kCharlieA && charlie_done_) {
            throw std::logic_error("Charlie's half is already measured");
        }
        state_ = apply_single_qubit(state_, qubit, Unitary2::from_pauli(p));
    }

    bool intercept_measure(RandomStream &rng) override {
        if (charlie_done_) {
            throw std::logic_error("qubit already delivered");
        }
        auto result = measure_computational(state_, kCharlieA, OutcomeSource<bool>::sample(rng));
        state_ = *result.collapsed;
        return result.outcome;
    }

    BellLabel charlie_bsm(OutcomeSource<BellLabel> source) override {
        if (charlie_done_) {
            throw std::logic_error("Charlie already measured this pair");
        }
        ac_at_bsm_ = bell_label_of(kAlice, kCharlieA);
        auto result = bsm(state_, kCharlieA, kCharlieB, source);
        if (!result.collapsed) {
            throw std::logic_error("forced Bell outcome " + result.outcome.str() + " has probability zero");
        }
        state_ = *result.collapsed;
        charlie_done_ = true;
        swapped_ = bell_label_of(kAlice, kBob);
        return result.outcome;
    }

    void prepare_bob_input(bool bit, const BobUnitary &u) override {
        if (bit) {
            state_ = apply_single_qubit(state_, kInput, Unitary2::pauli_x());
        }
        state_ = apply_single_qubit(state_, kInput, matrix_of(u));
        has_input_ = true;
    }

    BellLabel bob_bsm(OutcomeSource<BellLabel> source) override {
        if (!charlie_done_ || !has_input_ || bob_done_) {
            throw std::logic_error("Bob's teleportation out of order");
        }
        auto result = bsm(state_, kInput, kBob, source);
        if (!result.collapsed) {
            throw std::logic_error("forced Bell outcome " + result.outcome.str() + " has probability zero");
        }
        state_ = *result.collapsed;
        bob_done_ = true;
        return result.outcome;
    }

    Qubit take_alice_qubit() override {
        if (!bob_done_) {
            throw std::logic_error("Alice's qubit has not received the teleported state");
        }
        return extract_qubit(state_, kAlice);
    }

    std::optional<BellLabel> ac_label_at_bsm() const override {
        return ac_at_bsm_;
    }
    std::optional<BellLabel> swapped_label() const override {
        return swapped_;
    }

   private:
    static constexpr int kAlice = 0;
    static constexpr int kCharlieA = 1;
    static constexpr int kBob = 2;
    static constexpr int kCharlieB = 3;
    static constexpr int kInput = 4;

    std::optional<BellLabel> bell_label_of(int q1, int q2) const {
        auto probabilities = bell_probabilities(state_, q1, q2);
        for (uint8_t code = 0; code < 4; code++) {
            if (probabilities[code] > 1 - kStateTolerance) {
                return BellLabel::from_code(code);
            }
        }
        return std::nullopt;
    }

    StateVector state_;
    bool charlie_done_ = false;
    bool has_input_ = false;
    bool bob_done_ = false;
    std::optional<BellLabel> ac_at_bsm_;
    std::optional<BellLabel> swapped_;
};

template <typename T>
void check_forced_size(const std::vector<T> &values, size_t n, const char *name) {
    if (!values.empty() && values.size() != n) {
        throw std::invalid_argument(
            std::string("forced ") + name + " has " + std::to_string(values.size()) + " entries for " +
            std::to_string(n) + " pairs");
    }
}

OutcomeSource<BellLabel> bell_source(const std::vector<BellLabel> &forced, size_t k, RandomStream &rng) {
    if (!forced.empty()) {
        return OutcomeSource<BellLabel>::forced(forced[k]);
    }
    return OutcomeSource<BellLabel>::sample(rng);
}

TimeStamp after(TimeStamp t, double seconds) {
    return TimeStamp::at(t.seconds + seconds);
}

}  // namespace

std::string to_string(CommitmentValue value) {
    switch (value) {
        case CommitmentValue::kBit0:
            return "BIT0";
        case CommitmentValue::kBit1:
            return "BIT1";
        case CommitmentValue::kQubitPlus:
            return "QUBIT_PLUS";
        case CommitmentValue::kQubitMinus:
            return "QUBIT_MINUS";
    }
    throw std::logic_error("bad CommitmentValue");
}

std::optional<CommitmentValue> parse_commitment(std::string_view text) {
    for (auto v : {CommitmentValue::kBit0, CommitmentValue::kBit1, CommitmentValue::kQubitPlus,
                   CommitmentValue::kQubitMinus}) {
        if (text == to_string(v)) {
            return v;
        }
    }
    return std::nullopt;
}

BellLabel encode_commitment(CommitmentValue value) {
    return BellLabel::from_code(static_cast<uint8_t>(value));
}

CommitmentValue decode_commitment(std::span<const BellLabel> labels) {
    if (labels.empty()) {
        throw std::invalid_argument("no labels to decode");
    }
    for (const auto &label : labels) {
        if (label != labels.front()) {
            throw InconsistentLabels("labels differ across pairs: " + labels.front().str() + " vs " + label.str());
        }
    }
    return static_cast<CommitmentValue>(labels.front().code());
}

std::string to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::kStateMismatch:
            return "STATE_MISMATCH";
        case RejectReason::kInconsistentLabels:
            return "INCONSISTENT_LABELS";
        case RejectReason::kTimingViolation:
            return "TIMING_VIOLATION";
        case RejectReason::kMalformedMessage:
            return "MALFORMED_MESSAGE";
    }
    throw std::logic_error("bad RejectReason");
}

std::optional<RejectReason> parse_reject_reason(std::string_view text) {
    for (auto r : {RejectReason::kStateMismatch, RejectReason::kInconsistentLabels, RejectReason::kTimingViolation,
                   RejectReason::kMalformedMessage}) {
        if (text == to_string(r)) {
            return r;
        }
    }
    return std::nullopt;
}

std::string Verdict::str() const {
    return accepted ? "ACCEPT:" + to_string(value) : "REJECT:" + to_string(reason);
}

bool Verdict::operator==(const Verdict &other) const {
    if (accepted != other.accepted) {
        return false;
    }
    return accepted ? value == other.value : reason == other.reason;
}

std::string to_string(Party party) {
    switch (party) {
        case Party::kAlice:
            return "A";
        case Party::kBob:
            return "B";
        case Party::kCharlie:
            return "C";
        case Party::kEve:
            return "E";
    }
    throw std::logic_error("bad Party");
}

Geometry canonical_geometry(double d_m) {
    return Geometry{Position1D::at(0), Position1D::at(d_m), Position1D::at(-d_m)};
}

std::string to_string(RunMode mode) {
    return mode == RunMode::kSymbolic ? "symbolic" : "oracle";
}

std::optional<RunMode> parse_run_mode(std::string_view text) {
    if (text == "symbolic") {
        return RunMode::kSymbolic;
    }
    if (text == "oracle") {
        return RunMode::kOracle;
    }
    return std::nullopt;
}

std::string to_string(UnitaryDistribution distribution) {
    return distribution == UnitaryDistribution::kClifford ? "clifford" : "haar";
}

std::optional<UnitaryDistribution> parse_unitary_distribution(std::string_view text) {
    if (text == "clifford") {
        return UnitaryDistribution::kClifford;
    }
    if (text == "haar") {
        return UnitaryDistribution::kHaar;
    }
    return std::nullopt;
}

Unitary2 matrix_of(const BobUnitary &u) {
    return std::visit(
        Overloaded{
            [](const CliffordOp &c) { return clifford_matrix(c); },
            [](const Unitary2 &m) { return m; },
        },
        u);
}

void apply_pauli(Qubit &qubit, PauliLabel p) {
    std::visit(
        Overloaded{
            [&](FrameQubit &q) { q.residual = compose_paulis(q.residual, p); },
            [&](StateVector &s) { s = apply_single_qubit(s, 0, Unitary2::from_pauli(p)); },
        },
        qubit);
}

void apply_inverse(Qubit &qubit, const BobUnitary &u) {
    std::visit(
        Overloaded{
            [&](FrameQubit &q) {
                const auto *clifford = std::get_if<CliffordOp>(&u);
                if (clifford == nullptr) {
                    throw std::invalid_argument("cannot undo a non-Clifford unitary on a Pauli frame");
                }
                // V^dagger R C |b> = (V^dagger R V) (V^dagger C) |b>
                q.residual = conjugate_pauli(*clifford, q.residual).pauli;
                q.clifford = clifford->inverse() * q.clifford;
            },
            [&](StateVector &s) { s = apply_single_qubit(s, 0, matrix_of(u).adjoint()); },
        },
        qubit);
}

bool measure(const Qubit &qubit, RandomStream &rng) {
    return std::visit(
        Overloaded{
            [&](const FrameQubit &q) {
                SignedPauli z_image = q.clifford.forward({kPauliZ, false});
                if (z_image.pauli != kPauliZ) {
                    return rng.sample_index(kUniformBit) == 1;
                }
                return (q.basis_bit != z_image.negative) != q.residual.x_exp;
            },
            [&](const StateVector &s) {
                return measure_computational(s, 0, OutcomeSource<bool>::sample(rng)).outcome;
            },
        },
        qubit);
}

std::unique_ptr<PairWorld> make_pair_world(RunMode mode, BellLabel alice_label, BellLabel bc_label) {
    if (mode == RunMode::kSymbolic) {
        return std::make_unique<SymbolicPair>(alice_label, bc_label);
    }
    return std::make_unique<OraclePair>(alice_label, bc_label);
}

std::string kind_of(const Payload &payload) {
    return std::visit(
        Overloaded{
            [](const QubitShipment &) { return std::string("qubit_shipment"); },
            [](const DummyNotice &) { return std::string("dummy"); },
            [](const LabelAnnouncement &) { return std::string("announcement"); },
            [](const ReturnedQubits &) { return std::string("returned_qubits"); },
            [](const CharlieReport &) { return std::string("charlie_report"); },
        },
        payload);
}

AliceCommitment alice_commit(CommitmentValue value, size_t n_pairs, Position1D announced_position) {
    if (n_pairs == 0) {
        throw std::invalid_argument("need at least one pair");
    }
    return AliceCommitment{
        std::vector<BellLabel>(n_pairs, encode_commitment(value)),
        QubitShipment{n_pairs},
        DummyNotice{announced_position},
    };
}

CharlieRecord charlie_process(
    const QubitShipment &incoming,
    Pairs &pairs,
    std::span<const PauliLabel> pauli_set,
    TimeStamp now,
    RandomStream &charlie_rng,
    RandomStream &nature_rng,
    const ForcedRandomness &forced) {
    if (incoming.count != pairs.size()) {
        throw MalformedMessage(
            "Charlie received " + std::to_string(incoming.count) + " qubits but holds " +
            std::to_string(pairs.size()) + " B-C halves");
    }
    if (pauli_set.empty()) {
        throw std::invalid_argument("Charlie's Pauli set is empty");
    }
    CharlieRecord record;
    record.received_qubits = now;
    for (size_t k = 0; k < pairs.size(); k++) {
        PauliLabel p = forced.charlie_paulis.empty() ? pauli_set[charlie_rng.below(pauli_set.size())]
                                                     : forced.charlie_paulis[k];
        pairs[k]->apply_pauli(PairSlot::kCharlieFromAlice, p);
        record.paulis.push_back(p);
        record.outcomes.push_back(pairs[k]->charlie_bsm(bell_source(forced.charlie_outcomes, k, nature_rng)));
    }
    return record;
}

CharlieReport charlie_report(const CharlieRecord &record, TimeStamp announcement_received) {
    return CharlieReport{record.received_qubits, announcement_received, record.paulis, record.outcomes};
}

std::vector<BellLabel> draw_bc_labels(size_t n_pairs, RandomStream &bob_rng, const ForcedRandomness &forced) {
    if (!forced.bc_labels.empty()) {
        return forced.bc_labels;
    }
    std::vector<BellLabel> labels;
    for (size_t k = 0; k < n_pairs; k++) {
        labels.push_back(BellLabel::from_code(static_cast<uint8_t>(bob_rng.below(4))));
    }
    return labels;
}

void bob_teleport(
    BobRecord &record,
    Pairs &pairs,
    UnitaryDistribution distribution,
    RandomStream &bob_rng,
    RandomStream &nature_rng,
    const ForcedRandomness &forced) {
    record.prepared_bits.clear();
    record.unitaries.clear();
    record.teleport_outcomes.clear();
    for (size_t k = 0; k < pairs.size(); k++) {
        bool bit = forced.bob_bits.empty() ? bob_rng.bit() : forced.bob_bits[k];
        BobUnitary u;
        if (!forced.bob_cliffords.empty()) {
            u = CliffordOp::from_index(forced.bob_cliffords[k]);
        } else if (distribution == UnitaryDistribution::kClifford) {
            u = CliffordOp::from_index(static_cast<int>(bob_rng.below(CliffordOp::kGroupSize)));
        } else {
            u = random_unitary(bob_rng);
        }
        pairs[k]->prepare_bob_input(bit, u);
        record.prepared_bits.push_back(bit);
        record.unitaries.push_back(u);
        record.teleport_outcomes.push_back(pairs[k]->bob_bsm(bell_source(forced.bob_outcomes, k, nature_rng)));
    }
}

RevealOutput alice_reveal_transform(std::vector<Qubit> held, std::span<const BellLabel> labels) {
    if (held.size() != labels.size()) {
        throw std::invalid_argument("one label per held qubit is required");
    }
    for (size_t k = 0; k < held.size(); k++) {
        apply_pauli(held[k], reveal_pauli(labels[k]));
    }
    return RevealOutput{
        ReturnedQubits{std::move(held)},
        LabelAnnouncement{std::vector<BellLabel>(labels.begin(), labels.end())},
    };
}

BobVerification bob_verify(const BobInputs &inputs, RandomStream &measurement_rng) {
    if (inputs.own == nullptr) {
        throw std::invalid_argument("bob_verify needs Bob's own record");
    }
    const BobRecord &own = *inputs.own;
    BobVerification result;
    auto reject = [&](RejectReason reason) {
        result.verdict = Verdict::reject(reason);
        return result;
    };

    if (!inputs.announcement || !inputs.returned || !inputs.report) {
        return reject(RejectReason::kTimingViolation);
    }
    const auto &announced = inputs.announcement->payload.labels;
    const auto &qubits = inputs.returned->payload.qubits;
    const auto &report = inputs.report->payload;

    double d_bob = distance(own.announced_alice, inputs.bob_position);
    double d_agent = distance(own.announced_alice, inputs.charlie_position);
    result.bob_window = TimingWindow{own.dummy_received, inputs.announcement->at, d_bob};
    result.agent_window = TimingWindow{report.received_qubits, report.received_announcement, d_agent};

    size_t n = inputs.n_pairs;
    bool sizes_ok = announced.size() == n && qubits.size() == n && report.paulis.size() == n &&
                    report.outcomes.size() == n && own.bc_labels.size() == n && own.prepared_bits.size() == n &&
                    own.unitaries.size() == n && own.teleport_outcomes.size() == n;
    if (n == 0 || !sizes_ok) {
        return reject(RejectReason::kMalformedMessage);
    }

    CommitmentValue value;
    try {
        value = decode_commitment(announced);
    } catch (const InconsistentLabels &) {
        return reject(RejectReason::kInconsistentLabels);
    }

    bool all_ok = true;
    for (size_t k = 0; k < n; k++) {
        PairCheck check;
        check.claimed_ac_label = apply_pauli_to_label(announced[k], report.paulis[k]);
        check.claimed_swapped_label = swap_labels(check.claimed_ac_label, own.bc_labels[k], report.outcomes[k]);
        check.correction = teleport_correction(check.claimed_swapped_label, own.teleport_outcomes[k]);
        Qubit q = qubits[k];
        apply_pauli(q, reveal_pauli(announced[k]));
        apply_pauli(q, check.correction.as_pauli());
        apply_inverse(q, own.unitaries[k]);
        check.measured_bit = measure(q, measurement_rng);
        check.ok = check.measured_bit == own.prepared_bits[k];
        all_ok = all_ok && check.ok;
        result.pairs.push_back(check);
    }
    if (!all_ok) {
        return reject(RejectReason::kStateMismatch);
    }

    double eps = inputs.epsilon_s;
    bool timing_ok = cross_check_clocks(*result.bob_window, *result.agent_window, eps) &&
                     check_window(own.dummy_received, inputs.returned->at, d_bob, eps) &&
                     check_window(
                         report.received_announcement,
                         inputs.report->at,
                         distance(inputs.charlie_position, inputs.bob_position),
                         eps);
    if (!timing_ok) {
        return reject(RejectReason::kTimingViolation);
    }
    result.verdict = Verdict::accept(value);
    return result;
}

std::vector<PauliLabel> AliceBehavior::retained_paulis(const AliceView &, RandomStream &) {
    return {};
}

std::vector<BellLabel> AliceBehavior::announced_labels(const AliceView &view) {
    return view.committed_labels.get();
}

double AliceBehavior::reveal_delay_s(const AliceView &) {
    return 0;
}

Position1D AliceBehavior::reveal_origin(const AliceView &view) {
    return view.position.get();
}

namespace {

struct Delivery {
    Party sender;
    Party receiver;
    Payload payload;
};

struct AliceRevealTimer {};

using Event = std::variant<Delivery, AliceRevealTimer>;

class Run {
   public:
    Run(const ProtocolSettings &settings, AliceBehavior &alice, ChannelTap *tap, uint64_t seed)
        : settings_(settings),
          alice_(alice),
          tap_(tap),
          alice_rng_(derive_seed(seed, static_cast<uint64_t>(StreamId::kAlice))),
          bob_rng_(derive_seed(seed, static_cast<uint64_t>(StreamId::kBob))),
          charlie_rng_(derive_seed(seed, static_cast<uint64_t>(StreamId::kCharlie))),
          nature_rng_(derive_seed(seed, static_cast<uint64_t>(StreamId::kNature))),
          eve_rng_(derive_seed(seed, static_cast<uint64_t>(StreamId::kEve))),
          measurement_rng_(derive_seed(seed, static_cast<uint64_t>(StreamId::kMeasurement))) {
    }

    ProtocolTranscript execute() {
        size_t n = settings_.pairs;
        transcript_.mode = settings_.mode;
        transcript_.n_pairs = n;
        transcript_.geometry = settings_.geometry;
        transcript_.truth.resize(n);
        try {
            setup();
            run_until_idle(queue_, [this](const EventQueue<Event>::Entry &entry, EventQueue<Event> &) {
                handle(entry.time, entry.event);
            });
            inputs_.n_pairs = n;
            inputs_.own = &bob_;
            inputs_.bob_position = settings_.geometry.bob;
            inputs_.charlie_position = settings_.geometry.charlie;
            inputs_.epsilon_s = settings_.epsilon_s;
            auto verification = bob_verify(inputs_, measurement_rng_);
            transcript_.verdict = verification.verdict;
            transcript_.bob_checks = std::move(verification.pairs);
            transcript_.bob_window = verification.bob_window;
            transcript_.agent_window = verification.agent_window;
        } catch (const MalformedMessage &) {
            transcript_.verdict = Verdict::reject(RejectReason::kMalformedMessage);
        }
        finish_records();
        return std::move(transcript_);
    }

   private:
    Position1D position_of(Party party) const {
        switch (party) {
            case Party::kAlice:
                return settings_.geometry.alice;
            case Party::kBob:
                return settings_.geometry.bob;
            case Party::kCharlie:
                return settings_.geometry.charlie;
            case Party::kEve:
                break;
        }
        throw std::logic_error("party has no position");
    }

    void send(Party from, Party to, Payload payload, TimeStamp at, Position1D origin) {
        TimeStamp arrival = after(at, latency(origin, position_of(to)));
        transcript_.messages.push_back({from, to, kind_of(payload), at.seconds, arrival.seconds});
        queue_.schedule(arrival, Delivery{from, to, std::move(payload)});
    }

    void setup() {
        size_t n = settings_.pairs;
        const auto &g = settings_.geometry;
        auto commitment = alice_commit(settings_.commitment, n, g.alice);
        committed_labels_ = commitment.labels;
        bob_.bc_labels = draw_bc_labels(n, bob_rng_, settings_.forced);
        for (size_t k = 0; k < n; k++) {
            pairs_.push_back(make_pair_world(settings_.mode, committed_labels_[k], bob_.bc_labels[k]));
        }

        TimeStamp commit_time{};
        TimeStamp reveal_at = after(
            commit_time, std::max(latency(g.alice, g.bob), latency(g.alice, g.charlie)) + settings_.processing_delay_s);
        view_ = AliceView{
            Known<Party::kAlice, CommitmentValue>(settings_.commitment),
            Known<Party::kAlice, std::vector<BellLabel>>(committed_labels_),
            Known<Party::kAlice, Position1D>(g.alice),
            Known<Party::kAlice, TimeStamp>(commit_time),
            Known<Party::kAlice, TimeStamp>(reveal_at),
        };

        send(Party::kAlice, Party::kCharlie, commitment.to_charlie, commit_time, g.alice);
        send(Party::kAlice, Party::kBob, commitment.to_bob, commit_time, g.alice);

        auto retained = alice_.retained_paulis(view_, alice_rng_);
        if (!retained.empty() && retained.size() != n) {
            throw std::invalid_argument("retained Paulis must be empty or one per pair");
        }
        for (size_t k = 0; k < retained.size(); k++) {
            pairs_[k]->apply_pauli(PairSlot::kAliceHalf, retained[k]);
            transcript_.truth[k].alice_retained_pauli = retained[k];
        }

        double delay = alice_.reveal_delay_s(view_);
        if (!(delay >= 0)) {
            throw std::invalid_argument("reveal delay must be non-negative");
        }
        queue_.schedule(after(reveal_at, delay), AliceRevealTimer{});
    }

    void handle(TimeStamp now, const Event &event) {
        if (std::holds_alternative<AliceRevealTimer>(event)) {
            alice_reveal(now);
            return;
        }
        const auto &delivery = std::get<Delivery>(event);
        switch (delivery.receiver) {
            case Party::kCharlie:
                charlie_receive(now, delivery);
                return;
            case Party::kBob:
                bob_receive(now, delivery);
                return;
            default:
                throw MalformedMessage("no handler for messages to " + to_string(delivery.receiver));
        }
    }

    void alice_reveal(TimeStamp now) {
        std::vector<Qubit> held;
        for (auto &pair : pairs_) {
            held.push_back(pair->take_alice_qubit());
        }
        auto announced = alice_.announced_labels(view_);
        transcript_.alice_announced_labels = announced;
        auto reveal = alice_reveal_transform(std::move(held), announced);
        Position1D origin = alice_.reveal_origin(view_);
        send(Party::kAlice, Party::kBob, std::move(reveal.to_bob), now, origin);
        send(Party::kAlice, Party::kBob, reveal.announcement, now, origin);
        send(Party::kAlice, Party::kCharlie, std::move(reveal.announcement), now, origin);
    }

    void charlie_receive(TimeStamp now, const Delivery &delivery) {
        if (const auto *shipment = std::get_if<QubitShipment>(&delivery.payload)) {
            if (charlie_) {
                throw MalformedMessage("duplicate qubit shipment");
            }
            if (tap_ != nullptr) {
                for (size_t k = 0; k < std::min(shipment->count, pairs_.size()); k++) {
                    if (tap_->intercepts(k, eve_rng_)) {
                        pairs_[k]->intercept_measure(eve_rng_);
                        transcript_.truth[k].intercepted = true;
                    }
                }
            }
            charlie_ = charlie_process(
                *shipment, pairs_, settings_.charlie_paulis, now, charlie_rng_, nature_rng_, settings_.forced);
            if (teleport_pending_) {
                teleport_pending_ = false;
                bob_teleport(bob_, pairs_, settings_.unitaries, bob_rng_, nature_rng_, settings_.forced);
            }
            return;
        }
        if (const auto *announcement = std::get_if<LabelAnnouncement>(&delivery.payload)) {
            if (!charlie_) {
                throw MalformedMessage("announcement reached Charlie before any qubits");
            }
            transcript_.charlie_received_labels = announcement->labels;
            send(
                Party::kCharlie,
                Party::kBob,
                charlie_report(*charlie_, now),
                after(now, settings_.processing_delay_s),
                settings_.geometry.charlie);
            return;
        }
        throw MalformedMessage("Charlie cannot handle " + kind_of(delivery.payload));
    }

    void bob_receive(TimeStamp now, const Delivery &delivery) {
        const Payload &payload = delivery.payload;
        if (const auto *notice = std::get_if<DummyNotice>(&payload)) {
            if (dummy_seen_) {
                throw MalformedMessage("duplicate dummy state");
            }
            dummy_seen_ = true;
            bob_.dummy_received = now;
            bob_.announced_alice = notice->announced_position;
            if (charlie_) {
                bob_teleport(bob_, pairs_, settings_.unitaries, bob_rng_, nature_rng_, settings_.forced);
            } else {
                // Bob is nearer than Charlie. His measurement acts on other
                // qubits, so simulating it after Charlie's changes nothing.
                teleport_pending_ = true;
            }
        } else if (const auto *announcement = std::get_if<LabelAnnouncement>(&payload)) {
            store(inputs_.announcement, *announcement, now);
        } else if (const auto *returned = std::get_if<ReturnedQubits>(&payload)) {
            store(inputs_.returned, *returned, now);
        } else if (const auto *report = std::get_if<CharlieReport>(&payload)) {
            store(inputs_.report, *report, now);
        } else {
            throw MalformedMessage("Bob cannot handle " + kind_of(payload));
        }
    }

    template <typename T>
    static void store(std::optional<Received<T>> &slot, const T &payload, TimeStamp now) {
        if (slot) {
            throw MalformedMessage("duplicate reveal-phase message");
        }
        slot = Received<T>{payload, now};
    }

    void finish_records() {
        size_t n = settings_.pairs;
        for (size_t k = 0; k < n; k++) {
            PairRecord record;
            record.index = k;
            if (k < committed_labels_.size()) {
                record.alice_label = committed_labels_[k];
            }
            if (k < bob_.bc_labels.size()) {
                record.bc_label = bob_.bc_labels[k];
            }
            if (charlie_ && k < charlie_->paulis.size()) {
                record.charlie_pauli = charlie_->paulis[k];
                record.charlie_bsm = charlie_->outcomes[k];
            }
            if (k < bob_.teleport_outcomes.size()) {
                record.bob_prepared_bit = bob_.prepared_bits[k];
                record.bob_unitary = bob_.unitaries[k];
                record.bob_teleport_bsm = bob_.teleport_outcomes[k];
            }
            transcript_.pairs.push_back(record);
            if (k < pairs_.size()) {
                transcript_.truth[k].ac_label_at_bsm = pairs_[k]->ac_label_at_bsm();
                transcript_.truth[k].swapped_label = pairs_[k]->swapped_label();
            }
        }
    }

    const ProtocolSettings &settings_;
    AliceBehavior &alice_;
    ChannelTap *tap_;
    RandomStream alice_rng_;
    RandomStream bob_rng_;
    RandomStream charlie_rng_;
    RandomStream nature_rng_;
    RandomStream eve_rng_;
    RandomStream measurement_rng_;

    EventQueue<Event> queue_;
    Pairs pairs_;
    std::vector<BellLabel> committed_labels_;
    AliceView view_;
    std::optional<CharlieRecord> charlie_;
    BobRecord bob_;
    bool dummy_seen_ = false;
    bool teleport_pending_ = false;
    BobInputs inputs_;
    ProtocolTranscript transcript_;
};

void validate_settings(const ProtocolSettings &settings, const ChannelTap *tap) {
    if (settings.pairs == 0) {
        throw std::invalid_argument("pairs must be >= 1");
    }
    if (settings.charlie_paulis.empty()) {
        throw std::invalid_argument("Charlie's Pauli set is empty");
    }
    if (!(settings.epsilon_s >= 0) || !(settings.processing_delay_s >= 0)) {
        throw std::invalid_argument("epsilon and processing delay must be non-negative");
    }
    if (settings.mode == RunMode::kSymbolic) {
        if (settings.unitaries != UnitaryDistribution::kClifford) {
            throw std::invalid_argument("symbolic mode needs Clifford U_n");
        }
        if (tap != nullptr) {
            throw std::invalid_argument("channel interception needs oracle mode");
        }
    }
    const auto &f = settings.forced;
    size_t n = settings.pairs;
    check_forced_size(f.bc_labels, n, "bc_labels");
    check_forced_size(f.charlie_paulis, n, "charlie_paulis");
    check_forced_size(f.charlie_outcomes, n, "charlie_outcomes");
    check_forced_size(f.bob_bits, n, "bob_bits");
    check_forced_size(f.bob_cliffords, n, "bob_cliffords");
    check_forced_size(f.bob_outcomes, n, "bob_outcomes");
}

nlohmann::ordered_json label_list(const std::vector<BellLabel> &labels) {
    auto out = nlohmann::ordered_json::array();
    for (const auto &label : labels) {
        out.push_back(label.str());
    }
    return out;
}

nlohmann::ordered_json window_json(const std::optional<TimingWindow> &window) {
    if (!window) {
        return nullptr;
    }
    return {
        {"start_s", window->start.seconds},
        {"end_s", window->end.seconds},
        {"distance_m", window->distance_m},
        {"elapsed_s", window->elapsed()},
    };
}

template <typename T>
nlohmann::ordered_json optional_label(const std::optional<T> &label) {
    if (!label) {
        return nullptr;
    }
    return label->str();
}

}  // namespace

ProtocolTranscript run_protocol(
    const ProtocolSettings &settings, AliceBehavior &alice, ChannelTap *tap, uint64_t seed) {
    validate_settings(settings, tap);
    return Run(settings, alice, tap, seed).execute();
}

nlohmann::ordered_json to_json(const Verdict &verdict) {
    nlohmann::ordered_json out;
    out["status"] = verdict.accepted ? "ACCEPT" : "REJECT";
    if (verdict.accepted) {
        out["value"] = to_string(verdict.value);
    } else {
        out["reason"] = to_string(verdict.reason);
    }
    return out;
}

nlohmann::ordered_json to_json(const ProtocolTranscript &transcript) {
    using json = nlohmann::ordered_json;
    json out;
    out["schema"] = "qpc.transcript/1";
    out["mode"] = to_string(transcript.mode);
    out["pairs"] = transcript.n_pairs;
    out["speed_of_light_m_per_s"] = kSpeedOfLight;
    out["geometry"] = {
        {"alice_m", transcript.geometry.alice.meters},
        {"bob_m", transcript.geometry.bob.meters},
        {"charlie_m", transcript.geometry.charlie.meters},
    };

    json records = json::array();
    for (const auto &r : transcript.pairs) {
        json unitary;
        if (const auto *c = std::get_if<CliffordOp>(&r.bob_unitary)) {
            unitary["clifford"] = c->index();
        } else {
            unitary["matrix"] = std::get<Unitary2>(r.bob_unitary).to_json();
        }
        records.push_back({
            {"index", r.index},
            {"alice_label", r.alice_label.str()},
            {"bc_label", r.bc_label.str()},
            {"charlie_pauli", r.charlie_pauli.str()},
            {"charlie_bsm", r.charlie_bsm.str()},
            {"bob_prepared_bit", r.bob_prepared_bit ? 1 : 0},
            {"bob_unitary", unitary},
            {"bob_teleport_bsm", r.bob_teleport_bsm.str()},
        });
    }
    out["records"] = records;

    json messages = json::array();
    for (const auto &m : transcript.messages) {
        messages.push_back({
            {"sender", to_string(m.sender)},
            {"receiver", to_string(m.receiver)},
            {"kind", m.kind},
            {"send_time_s", m.send_time_s},
            {"recv_time_s", m.recv_time_s},
        });
    }
    out["messages"] = messages;
    out["alice_announced_labels"] = label_list(transcript.alice_announced_labels);
    out["charlie_received_labels"] = label_list(transcript.charlie_received_labels);

    json checks = json::array();
    for (const auto &c : transcript.bob_checks) {
        checks.push_back({
            {"claimed_ac_label", c.claimed_ac_label.str()},
            {"claimed_swapped_label", c.claimed_swapped_label.str()},
            {"k", c.correction.k ? 1 : 0},
            {"k_prime", c.correction.k_prime ? 1 : 0},
            {"measured_bit", c.measured_bit ? 1 : 0},
            {"ok", c.ok},
        });
    }
    out["bob"] = {
        {"checks", checks},
        {"bob_window", window_json(transcript.bob_window)},
        {"agent_window", window_json(transcript.agent_window)},
    };

    json truth = json::array();
    for (const auto &t : transcript.truth) {
        truth.push_back({
            {"alice_retained_pauli", t.alice_retained_pauli.str()},
            {"intercepted", t.intercepted},
            {"ac_label_at_bsm", optional_label(t.ac_label_at_bsm)},
            {"swapped_label", optional_label(t.swapped_label)},
        });
    }
    out["ground_truth"] = truth;
    out["verdict"] = transcript.verdict ? to_json(*transcript.verdict) : json(nullptr);
    return out;
}

std::string dump_transcript(const ProtocolTranscript &transcript) {
    return to_json(transcript).dump(2) + "\n";
}

}  // namespace qpc
