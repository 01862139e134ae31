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

#ifndef QPC_PROTOCOL_H
#define QPC_PROTOCOL_H

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qpc/pauli_bell.h"
#include "qpc/random.h"
#include "qpc/spacetime.h"
#include "qpc/statevector.h"

namespace qpc {

// ---------------------------------------------------------------------------
// Commitment code and verdicts.

enum class CommitmentValue { kBit0, kBit1, kQubitPlus, kQubitMinus };

/// "BIT0", "BIT1", "QUBIT_PLUS", "QUBIT_MINUS".
std::string to_string(CommitmentValue value);
std::optional<CommitmentValue> parse_commitment(std::string_view text);

/// BIT0 <-> 00, BIT1 <-> 01, QUBIT_PLUS <-> 10, QUBIT_MINUS <-> 11.
BellLabel encode_commitment(CommitmentValue value);

class InconsistentLabels : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Fails with InconsistentLabels when the labels differ across pairs and with
/// std::invalid_argument when there are none.
CommitmentValue decode_commitment(std::span<const BellLabel> labels);

enum class RejectReason { kStateMismatch, kInconsistentLabels, kTimingViolation, kMalformedMessage };

/// "STATE_MISMATCH", "INCONSISTENT_LABELS", "TIMING_VIOLATION", "MALFORMED_MESSAGE".
std::string to_string(RejectReason reason);
std::optional<RejectReason> parse_reject_reason(std::string_view text);

struct Verdict {
    bool accepted = false;
    CommitmentValue value = CommitmentValue::kBit0;
    RejectReason reason = RejectReason::kMalformedMessage;

    static Verdict accept(CommitmentValue value) {
        return {true, value, RejectReason::kMalformedMessage};
    }
    static Verdict reject(RejectReason reason) {
        return {false, CommitmentValue::kBit0, reason};
    }
    /// "ACCEPT:BIT1" or "REJECT:STATE_MISMATCH".
    std::string str() const;
    bool operator==(const Verdict &other) const;
};

// ---------------------------------------------------------------------------
// Parties and what they may know.

enum class Party { kAlice, kBob, kCharlie, kEve };
std::string to_string(Party party);

/// A value owned by one party. Strategy hooks only ever receive values
/// tagged with their own party.
template <Party Owner, typename T>
class Known {
   public:
    static constexpr Party owner = Owner;

    Known() = default;
    explicit Known(T value) : value_(std::move(value)) {
    }
    const T &get() const {
        return value_;
    }

   private:
    T value_{};
};

struct Geometry {
    Position1D alice;
    Position1D bob;
    Position1D charlie;
};

/// C at -d, A at 0, B at +d.
Geometry canonical_geometry(double d_m);

// ---------------------------------------------------------------------------
// Qubits and pair physics.

enum class RunMode { kSymbolic, kOracle };
std::string to_string(RunMode mode);
std::optional<RunMode> parse_run_mode(std::string_view text);

enum class UnitaryDistribution { kClifford, kHaar };
std::string to_string(UnitaryDistribution distribution);
std::optional<UnitaryDistribution> parse_unitary_distribution(std::string_view text);

/// Bob's U_n: a Clifford in either mode, an arbitrary unitary in oracle mode.
using BobUnitary = std::variant<CliffordOp, Unitary2>;
Unitary2 matrix_of(const BobUnitary &u);

/// Pauli frame of one qubit: residual * clifford |basis_bit>, global phase
/// dropped.
struct FrameQubit {
    PauliLabel residual;
    CliffordOp clifford;
    bool basis_bit = false;
};

/// Symbolic mode carries a FrameQubit; oracle mode a one-qubit StateVector.
using Qubit = std::variant<FrameQubit, StateVector>;

void apply_pauli(Qubit &qubit, PauliLabel p);
/// Applies u^dagger. Fails with std::invalid_argument for a non-Clifford u
/// on a FrameQubit.
void apply_inverse(Qubit &qubit, const BobUnitary &u);
/// Computational-basis measurement (Born rule; random outcomes use `rng`).
bool measure(const Qubit &qubit, RandomStream &rng);

/// Where a Pauli lands on the A-C pair before Charlie's Bell measurement.
enum class PairSlot { kAliceHalf, kCharlieFromAlice };

/// Physical state of one protocol pair: the A-C Bell pair, the B-C Bell pair
/// and Bob's teleportation input. Operations must follow protocol order:
/// Charlie's measurement, then Bob's, then Alice's qubit is taken.
class PairWorld {
   public:
    virtual ~PairWorld() = default;

    virtual void apply_pauli(PairSlot slot, PauliLabel p) = 0;
    /// Computational-basis measurement of the A-C half in transit, resent
    /// in the observed state. Oracle mode only.
    virtual bool intercept_measure(RandomStream &rng) = 0;
    virtual BellLabel charlie_bsm(OutcomeSource<BellLabel> source) = 0;
    virtual void prepare_bob_input(bool bit, const BobUnitary &u) = 0;
    virtual BellLabel bob_bsm(OutcomeSource<BellLabel> source) = 0;
    virtual Qubit take_alice_qubit() = 0;

    /// Simulator ground truth (no party sees these). Empty when the pair is
    /// not in a Bell state, e.g. after interception.
    virtual std::optional<BellLabel> ac_label_at_bsm() const = 0;
    virtual std::optional<BellLabel> swapped_label() const = 0;
};

std::unique_ptr<PairWorld> make_pair_world(RunMode mode, BellLabel alice_label, BellLabel bc_label);

using Pairs = std::vector<std::unique_ptr<PairWorld>>;

// ---------------------------------------------------------------------------
// Messages.

struct QubitShipment {
    size_t count = 0;
};

/// Stands in for the dummy state; carries Alice's announced position.
struct DummyNotice {
    Position1D announced_position;
};

struct LabelAnnouncement {
    std::vector<BellLabel> labels;
};

struct ReturnedQubits {
    std::vector<Qubit> qubits;
};

struct CharlieReport {
    TimeStamp received_qubits;       // t'
    TimeStamp received_announcement; // T'
    std::vector<PauliLabel> paulis;
    std::vector<BellLabel> outcomes;
};

using Payload = std::variant<QubitShipment, DummyNotice, LabelAnnouncement, ReturnedQubits, CharlieReport>;

/// "qubit_shipment", "dummy", "announcement", "returned_qubits", "charlie_report".
std::string kind_of(const Payload &payload);

struct MessageLogEntry {
    Party sender;
    Party receiver;
    std::string kind;
    double send_time_s;
    double recv_time_s;
};

template <typename T>
struct Received {
    T payload;
    TimeStamp at;
};

// ---------------------------------------------------------------------------
// Randomness overrides. An empty vector means "draw"; otherwise it must have
// one entry per pair.

struct ForcedRandomness {
    std::vector<BellLabel> bc_labels;
    std::vector<PauliLabel> charlie_paulis;
    std::vector<BellLabel> charlie_outcomes;
    std::vector<bool> bob_bits;
    std::vector<int> bob_cliffords;
    std::vector<BellLabel> bob_outcomes;
};

// ---------------------------------------------------------------------------
// Party operations.

struct AliceCommitment {
    std::vector<BellLabel> labels;
    QubitShipment to_charlie;
    DummyNotice to_bob;
};

AliceCommitment alice_commit(CommitmentValue value, size_t n_pairs, Position1D announced_position);

struct CharlieRecord {
    TimeStamp received_qubits;
    std::vector<PauliLabel> paulis;
    std::vector<BellLabel> outcomes;
};

/// Applies a Pauli from `pauli_set` to each incoming A-C half and Bell-
/// measures it with the matching B-C half. Fails with MalformedMessage when
/// the shipment size does not match the pairs Charlie holds.
CharlieRecord charlie_process(
    const QubitShipment &incoming,
    Pairs &pairs,
    std::span<const PauliLabel> pauli_set,
    TimeStamp now,
    RandomStream &charlie_rng,
    RandomStream &nature_rng,
    const ForcedRandomness &forced);

/// Sent to Bob once Alice's announcement reaches Charlie.
CharlieReport charlie_report(const CharlieRecord &record, TimeStamp announcement_received);

struct BobRecord {
    std::vector<BellLabel> bc_labels;
    std::vector<bool> prepared_bits;
    std::vector<BobUnitary> unitaries;
    std::vector<BellLabel> teleport_outcomes;
    TimeStamp dummy_received;
    Position1D announced_alice;
};

std::vector<BellLabel> draw_bc_labels(size_t n_pairs, RandomStream &bob_rng, const ForcedRandomness &forced);

/// Prepares U_n |u_i> per pair and teleports it through the swapped A-B
/// pair. Fills everything in `record` except bc_labels and timing.
void bob_teleport(
    BobRecord &record,
    Pairs &pairs,
    UnitaryDistribution distribution,
    RandomStream &bob_rng,
    RandomStream &nature_rng,
    const ForcedRandomness &forced);

struct RevealOutput {
    ReturnedQubits to_bob;
    LabelAnnouncement announcement;
};

/// Applies reveal_pauli(label) to each held qubit and announces the labels.
RevealOutput alice_reveal_transform(std::vector<Qubit> held, std::span<const BellLabel> labels);

struct PairCheck {
    BellLabel claimed_ac_label;
    BellLabel claimed_swapped_label;
    TeleportCorrection correction;
    bool measured_bit = false;
    bool ok = false;
};

struct BobInputs {
    size_t n_pairs = 0;
    const BobRecord *own = nullptr;
    Position1D bob_position;
    Position1D charlie_position;
    double epsilon_s = 0;
    std::optional<Received<LabelAnnouncement>> announcement;
    std::optional<Received<ReturnedQubits>> returned;
    std::optional<Received<CharlieReport>> report;
};

struct BobVerification {
    Verdict verdict;
    std::vector<PairCheck> pairs;
    std::optional<TimingWindow> bob_window;
    std::optional<TimingWindow> agent_window;
};

/// Checks, in order: all reveal-phase messages present (else
/// TIMING_VIOLATION), message sizes (MALFORMED_MESSAGE), label consistency
/// (INCONSISTENT_LABELS), every pair returning |u_i> (STATE_MISMATCH), then
/// the timing windows and clock cross-check (TIMING_VIOLATION).
BobVerification bob_verify(const BobInputs &inputs, RandomStream &measurement_rng);

// ---------------------------------------------------------------------------
// Strategy hooks.

/// Everything Alice knows when she acts.
struct AliceView {
    Known<Party::kAlice, CommitmentValue> committed;
    Known<Party::kAlice, std::vector<BellLabel>> committed_labels;
    Known<Party::kAlice, Position1D> position;
    Known<Party::kAlice, TimeStamp> commit_time;
    Known<Party::kAlice, TimeStamp> scheduled_reveal;

    auto tie() const {
        return std::tie(committed, committed_labels, position, commit_time, scheduled_reveal);
    }
};

/// Honest Alice. Adversaries override the hooks.
class AliceBehavior {
   public:
    virtual ~AliceBehavior() = default;

    /// Paulis applied to her retained halves right after committing; empty
    /// for none, otherwise one per pair.
    virtual std::vector<PauliLabel> retained_paulis(const AliceView &view, RandomStream &alice_rng);
    virtual std::vector<BellLabel> announced_labels(const AliceView &view);
    virtual double reveal_delay_s(const AliceView &view);
    virtual Position1D reveal_origin(const AliceView &view);
};

/// Third party on the A->C quantum channel.
class ChannelTap {
   public:
    virtual ~ChannelTap() = default;
    /// Whether to intercept-resend the qubit of pair `index`.
    virtual bool intercepts(size_t index, RandomStream &eve_rng) = 0;
};

// ---------------------------------------------------------------------------
// Whole runs.

struct ProtocolSettings {
    size_t pairs = 1;
    RunMode mode = RunMode::kSymbolic;
    Geometry geometry = canonical_geometry(3.0e5);
    CommitmentValue commitment = CommitmentValue::kBit0;
    UnitaryDistribution unitaries = UnitaryDistribution::kClifford;
    std::vector<PauliLabel> charlie_paulis = {kPauliX, kPauliZ, kPauliZX};
    double epsilon_s = 0;
    double processing_delay_s = 0;
    ForcedRandomness forced;
};

struct PairRecord {
    size_t index = 0;
    BellLabel alice_label;
    BellLabel bc_label;
    PauliLabel charlie_pauli;
    BellLabel charlie_bsm;
    bool bob_prepared_bit = false;
    BobUnitary bob_unitary;
    BellLabel bob_teleport_bsm;
};

struct PairTruth {
    PauliLabel alice_retained_pauli;
    bool intercepted = false;
    std::optional<BellLabel> ac_label_at_bsm;
    std::optional<BellLabel> swapped_label;
};

struct ProtocolTranscript {
    RunMode mode = RunMode::kSymbolic;
    size_t n_pairs = 0;
    Geometry geometry;
    std::vector<PairRecord> pairs;
    std::vector<MessageLogEntry> messages;
    std::vector<BellLabel> alice_announced_labels;
    std::vector<BellLabel> charlie_received_labels;
    std::vector<PairCheck> bob_checks;
    std::optional<TimingWindow> bob_window;
    std::optional<TimingWindow> agent_window;
    std::vector<PairTruth> truth;
    std::optional<Verdict> verdict;
};

/// Per-party stream indices under derive_seed(run_seed, .).
enum class StreamId : uint64_t { kAlice = 1, kBob = 2, kCharlie = 3, kNature = 4, kEve = 5, kMeasurement = 6 };

/// One deterministic run. `tap` may be null. Fails with
/// std::invalid_argument for settings the chosen mode cannot simulate.
ProtocolTranscript run_protocol(
    const ProtocolSettings &settings, AliceBehavior &alice, ChannelTap *tap, uint64_t seed);

nlohmann::ordered_json to_json(const ProtocolTranscript &transcript);
nlohmann::ordered_json to_json(const Verdict &verdict);
/// Two-space indented JSON with a trailing newline.
std::string dump_transcript(const ProtocolTranscript &transcript);

}  // namespace qpc

#endif
