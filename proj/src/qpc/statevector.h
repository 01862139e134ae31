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

#ifndef QPC_STATEVECTOR_H
#define QPC_STATEVECTOR_H

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qpc/pauli_bell.h"
#include "qpc/random.h"

namespace qpc {

using Complex = std::complex<double>;

inline constexpr double kStateTolerance = 1e-9;
inline constexpr int kMaxQubits = 12;

/// Dense pure state. Qubit 0 is the most significant bit of the amplitude
/// index (big-endian), so |q0 q1 ... q(n-1)> has index sum q_k 2^(n-1-k).
class StateVector {
   public:
    /// Computational basis state |index>.
    static StateVector basis(int n_qubits, size_t index = 0);
    /// Fails with std::invalid_argument unless the length is a power of two
    /// (at most 2^12) and the norm is 1 within kStateTolerance.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    int n_qubits() const {
        return n_qubits_;
    }
    std::span<const Complex> amplitudes() const {
        return amplitudes_;
    }
    Complex amplitude(size_t index) const {
        return amplitudes_[index];
    }
    double norm() const;

    /// this (x) other, with this state's qubits first.
    StateVector tensor(const StateVector &other) const;

    /// [[re, im], ...] for transcript debugging.
    nlohmann::ordered_json to_json() const;

   private:
    StateVector(int n_qubits, std::vector<Complex> amplitudes);

    int n_qubits_;
    std::vector<Complex> amplitudes_;
};

/// Row-major 2x2 matrix {m00, m01, m10, m11}.
struct Unitary2 {
    std::array<Complex, 4> m{Complex{1}, Complex{0}, Complex{0}, Complex{1}};

    static Unitary2 identity();
    static Unitary2 pauli_x();
    static Unitary2 pauli_y();
    static Unitary2 pauli_z();
    static Unitary2 hadamard();
    static Unitary2 phase_s();
    /// sigma_z^z sigma_x^x (not the Hermitian Y for the (1,1) label).
    static Unitary2 from_pauli(PauliLabel p);
    /// Hermitian representative with sign: +-I, +-X, +-Y, +-Z.
    static Unitary2 from_signed_pauli(SignedPauli p);

    Unitary2 adjoint() const;
    bool is_unitary(double tolerance = kStateTolerance) const;
    /// Max elementwise distance after removing the best global phase.
    double distance_up_to_phase(const Unitary2 &other) const;
    double distance(const Unitary2 &other) const;

    nlohmann::ordered_json to_json() const;

    friend Unitary2 operator*(const Unitary2 &a, const Unitary2 &b);
};

/// A matrix representative of each Clifford element, built by closing
/// {H, S} under multiplication and reading off the conjugation images.
const Unitary2 &clifford_matrix(const CliffordOp &op);

/// Haar-distributed 2x2 unitary from Gram-Schmidt on complex normal columns.
Unitary2 random_unitary(RandomStream &rng);

/// (|0>|parity> + (-1)^phase |1>|1 xor parity>) / sqrt(2) on two qubits.
StateVector prepare_bell(BellLabel label);

/// Fails with std::out_of_range for a bad qubit index.
StateVector apply_single_qubit(const StateVector &state, int qubit, const Unitary2 &u);

/// Either draw a measurement outcome by the Born rule or force a given one.
template <typename Outcome>
class OutcomeSource {
   public:
    static OutcomeSource sample(RandomStream &rng) {
        return OutcomeSource(&rng);
    }
    static OutcomeSource forced(Outcome outcome) {
        return OutcomeSource(outcome);
    }

    bool is_forced() const {
        return std::holds_alternative<Outcome>(source_);
    }
    RandomStream &rng() const {
        return *std::get<RandomStream *>(source_);
    }
    Outcome outcome() const {
        return std::get<Outcome>(source_);
    }

   private:
    explicit OutcomeSource(RandomStream *rng) : source_(std::in_place_index<0>, rng) {
    }
    explicit OutcomeSource(Outcome outcome) : source_(std::in_place_index<1>, outcome) {
    }

    std::variant<RandomStream *, Outcome> source_;
};

template <typename Outcome>
struct MeasurementResult {
    Outcome outcome;
    /// Absent when a forced outcome has probability below kStateTolerance.
    std::optional<StateVector> collapsed;
    double probability;
};

/// Probabilities of the four Bell outcomes on (q1, q2), indexed by label code.
std::array<double, 4> bell_probabilities(const StateVector &state, int q1, int q2);

/// Bell-basis measurement of (q1, q2). The measured pair is left in the
/// observed Bell state; the other qubits hold the renormalized residual.
MeasurementResult<BellLabel> bsm(const StateVector &state, int q1, int q2, OutcomeSource<BellLabel> source);

MeasurementResult<bool> measure_computational(const StateVector &state, int qubit, OutcomeSource<bool> source);

/// |<s1|s2>|^2. Fails with std::invalid_argument on a qubit-count mismatch.
double fidelity(const StateVector &s1, const StateVector &s2);

/// Single-qubit factor of `qubit`, which must be unentangled from the rest
/// within kStateTolerance (std::logic_error otherwise).
StateVector extract_qubit(const StateVector &state, int qubit);

}  // namespace qpc

#endif
