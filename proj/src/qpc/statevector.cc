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

#include "qpc/statevector.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qpc {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

size_t qubit_mask(int n_qubits, int qubit) {
    return size_t{1} << (n_qubits - 1 - qubit);
}

void check_qubit(const StateVector &state, int qubit) {
    if (qubit < 0 || qubit >= state.n_qubits()) {
        throw std::out_of_range(
            "qubit index " + std::to_string(qubit) + " out of range for " + std::to_string(state.n_qubits()) +
            " qubits");
    }
}

// Amplitudes of Bell(label) indexed by (first << 1) | second.
std::array<double, 4> bell_vector(BellLabel label) {
    std::array<double, 4> v{};
    v[label.parity ? 1 : 0] = kInvSqrt2;
    v[label.parity ? 2 : 3] = label.phase ? -kInvSqrt2 : kInvSqrt2;
    return v;
}

// Iterates over indices with the bits of q1 and q2 cleared.
template <typename Fn>
void for_each_rest(const StateVector &state, size_t m1, size_t m2, Fn &&fn) {
    size_t dim = state.amplitudes().size();
    for (size_t r = 0; r < dim; r++) {
        if ((r & m1) || (r & m2)) {
            continue;
        }
        fn(r, std::array<size_t, 4>{r, r | m2, r | m1, r | m1 | m2});
    }
}

}  // namespace

StateVector::StateVector(int n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
}

StateVector StateVector::basis(int n_qubits, size_t index) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count must be in [1, " + std::to_string(kMaxQubits) + "]");
    }
    std::vector<Complex> amps(size_t{1} << n_qubits);
    if (index >= amps.size()) {
        throw std::out_of_range("basis index out of range");
    }
    amps[index] = 1;
    return StateVector(n_qubits, std::move(amps));
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    size_t dim = amplitudes.size();
    int n = 0;
    while ((size_t{1} << n) < dim) {
        n++;
    }
    if (dim < 2 || (size_t{1} << n) != dim || n > kMaxQubits) {
        throw std::invalid_argument("amplitude count must be 2^n with 1 <= n <= 12");
    }
    StateVector result(n, std::move(amplitudes));
    if (std::abs(result.norm() - 1) > kStateTolerance) {
        throw std::invalid_argument("state is not normalized");
    }
    return result;
}

double StateVector::norm() const {
    double total = 0;
    for (const auto &a : amplitudes_) {
        total += std::norm(a);
    }
    return std::sqrt(total);
}

StateVector StateVector::tensor(const StateVector &other) const {
    int n = n_qubits_ + other.n_qubits_;
    if (n > kMaxQubits) {
        throw std::invalid_argument("tensor product exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
    std::vector<Complex> amps;
    amps.reserve(amplitudes_.size() * other.amplitudes_.size());
    for (const auto &a : amplitudes_) {
        for (const auto &b : other.amplitudes_) {
            amps.push_back(a * b);
        }
    }
    return StateVector(n, std::move(amps));
}

nlohmann::ordered_json StateVector::to_json() const {
    auto out = nlohmann::ordered_json::array();
    for (const auto &a : amplitudes_) {
        out.push_back({a.real(), a.imag()});
    }
    return out;
}

Unitary2 Unitary2::identity() {
    return {};
}

Unitary2 Unitary2::pauli_x() {
    return {{Complex{0}, Complex{1}, Complex{1}, Complex{0}}};
}

Unitary2 Unitary2::pauli_y() {
    return {{Complex{0}, Complex{0, -1}, Complex{0, 1}, Complex{0}}};
}

Unitary2 Unitary2::pauli_z() {
    return {{Complex{1}, Complex{0}, Complex{0}, Complex{-1}}};
}

Unitary2 Unitary2::hadamard() {
    return {{Complex{kInvSqrt2}, Complex{kInvSqrt2}, Complex{kInvSqrt2}, Complex{-kInvSqrt2}}};
}

Unitary2 Unitary2::phase_s() {
    return {{Complex{1}, Complex{0}, Complex{0}, Complex{0, 1}}};
}

Unitary2 Unitary2::from_pauli(PauliLabel p) {
    Unitary2 result;
    if (p.z_exp) {
        result = result * pauli_z();
    }
    if (p.x_exp) {
        result = result * pauli_x();
    }
    return result;
}

Unitary2 Unitary2::from_signed_pauli(SignedPauli p) {
    static const Unitary2 kHermitian[] = {identity(), pauli_x(), pauli_z(), pauli_y()};
    Unitary2 result = kHermitian[p.pauli.code()];
    if (p.negative) {
        for (auto &e : result.m) {
            e = -e;
        }
    }
    return result;
}

Unitary2 Unitary2::adjoint() const {
    return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

bool Unitary2::is_unitary(double tolerance) const {
    return (adjoint() * *this).distance(identity()) <= tolerance;
}

double Unitary2::distance(const Unitary2 &other) const {
    double worst = 0;
    for (size_t k = 0; k < 4; k++) {
        worst = std::max(worst, std::abs(m[k] - other.m[k]));
    }
    return worst;
}

double Unitary2::distance_up_to_phase(const Unitary2 &other) const {
    // Align phases with tr(A^dagger B).
    Complex overlap = 0;
    for (size_t k = 0; k < 4; k++) {
        overlap += std::conj(m[k]) * other.m[k];
    }
    Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex{1};
    Unitary2 rotated = *this;
    for (auto &e : rotated.m) {
        e *= phase;
    }
    return rotated.distance(other);
}

nlohmann::ordered_json Unitary2::to_json() const {
    auto out = nlohmann::ordered_json::array();
    for (const auto &e : m) {
        out.push_back({e.real(), e.imag()});
    }
    return out;
}

Unitary2 operator*(const Unitary2 &a, const Unitary2 &b) {
    return {{
        a.m[0] * b.m[0] + a.m[1] * b.m[2],
        a.m[0] * b.m[1] + a.m[1] * b.m[3],
        a.m[2] * b.m[0] + a.m[3] * b.m[2],
        a.m[2] * b.m[1] + a.m[3] * b.m[3],
    }};
}

namespace {

std::optional<SignedPauli> identify_signed_pauli(const Unitary2 &u) {
    for (uint8_t code = 0; code < 4; code++) {
        for (bool negative : {false, true}) {
            SignedPauli candidate{PauliLabel::from_code(code), negative};
            if (u.distance(Unitary2::from_signed_pauli(candidate)) < 1e-12) {
                return candidate;
            }
        }
    }
    return std::nullopt;
}

CliffordOp clifford_of_matrix(const Unitary2 &u) {
    auto x_image = identify_signed_pauli(u * Unitary2::pauli_x() * u.adjoint());
    auto z_image = identify_signed_pauli(u * Unitary2::pauli_z() * u.adjoint());
    if (!x_image || !z_image) {
        throw std::logic_error("matrix is not a Clifford");
    }
    return CliffordOp::from_images(*x_image, *z_image);
}

}  // namespace

const Unitary2 &clifford_matrix(const CliffordOp &op) {
    static const std::array<Unitary2, CliffordOp::kGroupSize> table = [] {
        std::array<Unitary2, CliffordOp::kGroupSize> result;
        std::array<bool, CliffordOp::kGroupSize> seen{};
        const Unitary2 generators[] = {Unitary2::hadamard(), Unitary2::phase_s()};
        std::deque<Unitary2> frontier{Unitary2::identity()};
        seen[0] = true;
        size_t found = 1;
        while (!frontier.empty()) {
            Unitary2 u = frontier.front();
            frontier.pop_front();
            for (const auto &g : generators) {
                Unitary2 next = g * u;
                int index = clifford_of_matrix(next).index();
                if (!seen[index]) {
                    seen[index] = true;
                    result[index] = next;
                    frontier.push_back(next);
                    found++;
                }
            }
        }
        if (found != CliffordOp::kGroupSize) {
            throw std::logic_error("H and S did not generate the Clifford group");
        }
        return result;
    }();
    return table[op.index()];
}

Unitary2 random_unitary(RandomStream &rng) {
    auto draw = [&rng]() {
        double re = rng.normal();
        double im = rng.normal();
        return Complex{re, im};
    };
    Complex a0 = draw(), a1 = draw(), b0 = draw(), b1 = draw();
    double na = std::sqrt(std::norm(a0) + std::norm(a1));
    a0 /= na;
    a1 /= na;
    Complex proj = std::conj(a0) * b0 + std::conj(a1) * b1;
    b0 -= proj * a0;
    b1 -= proj * a1;
    double nb = std::sqrt(std::norm(b0) + std::norm(b1));
    b0 /= nb;
    b1 /= nb;
    return {{a0, b0, a1, b1}};
}

StateVector prepare_bell(BellLabel label) {
    auto v = bell_vector(label);
    return StateVector::from_amplitudes({v[0], v[1], v[2], v[3]});
}

StateVector apply_single_qubit(const StateVector &state, int qubit, const Unitary2 &u) {
    check_qubit(state, qubit);
    size_t mask = qubit_mask(state.n_qubits(), qubit);
    std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
    for (size_t i = 0; i < amps.size(); i++) {
        if (i & mask) {
            continue;
        }
        Complex a0 = amps[i];
        Complex a1 = amps[i | mask];
        amps[i] = u.m[0] * a0 + u.m[1] * a1;
        amps[i | mask] = u.m[2] * a0 + u.m[3] * a1;
    }
    return StateVector::from_amplitudes(std::move(amps));
}

std::array<double, 4> bell_probabilities(const StateVector &state, int q1, int q2) {
    check_qubit(state, q1);
    check_qubit(state, q2);
    if (q1 == q2) {
        throw std::invalid_argument("Bell measurement needs two distinct qubits");
    }
    size_t m1 = qubit_mask(state.n_qubits(), q1);
    size_t m2 = qubit_mask(state.n_qubits(), q2);
    std::array<double, 4> probabilities{};
    for (uint8_t code = 0; code < 4; code++) {
        auto v = bell_vector(BellLabel::from_code(code));
        for_each_rest(state, m1, m2, [&](size_t, const std::array<size_t, 4> &idx) {
            Complex c = 0;
            for (size_t k = 0; k < 4; k++) {
                c += v[k] * state.amplitude(idx[k]);
            }
            probabilities[code] += std::norm(c);
        });
    }
    return probabilities;
}

MeasurementResult<BellLabel> bsm(const StateVector &state, int q1, int q2, OutcomeSource<BellLabel> source) {
    auto probabilities = bell_probabilities(state, q1, q2);
    BellLabel outcome = source.is_forced()
                            ? source.outcome()
                            : BellLabel::from_code(static_cast<uint8_t>(source.rng().sample_index(probabilities)));
    double p = probabilities[outcome.code()];
    if (p < kStateTolerance) {
        return {outcome, std::nullopt, p};
    }
    size_t m1 = qubit_mask(state.n_qubits(), q1);
    size_t m2 = qubit_mask(state.n_qubits(), q2);
    auto v = bell_vector(outcome);
    double scale = 1 / std::sqrt(p);
    std::vector<Complex> amps(state.amplitudes().size());
    for_each_rest(state, m1, m2, [&](size_t, const std::array<size_t, 4> &idx) {
        Complex c = 0;
        for (size_t k = 0; k < 4; k++) {
            c += v[k] * state.amplitude(idx[k]);
        }
        for (size_t k = 0; k < 4; k++) {
            amps[idx[k]] = v[k] * c * scale;
        }
    });
    return {outcome, StateVector::from_amplitudes(std::move(amps)), p};
}

MeasurementResult<bool> measure_computational(const StateVector &state, int qubit, OutcomeSource<bool> source) {
    check_qubit(state, qubit);
    size_t mask = qubit_mask(state.n_qubits(), qubit);
    std::array<double, 2> probabilities{};
    for (size_t i = 0; i < state.amplitudes().size(); i++) {
        probabilities[(i & mask) ? 1 : 0] += std::norm(state.amplitude(i));
    }
    bool outcome = source.is_forced() ? source.outcome() : source.rng().sample_index(probabilities) == 1;
    double p = probabilities[outcome ? 1 : 0];
    if (p < kStateTolerance) {
        return {outcome, std::nullopt, p};
    }
    double scale = 1 / std::sqrt(p);
    std::vector<Complex> amps(state.amplitudes().size());
    for (size_t i = 0; i < amps.size(); i++) {
        if (((i & mask) != 0) == outcome) {
            amps[i] = state.amplitude(i) * scale;
        }
    }
    return {outcome, StateVector::from_amplitudes(std::move(amps)), p};
}

double fidelity(const StateVector &s1, const StateVector &s2) {
    if (s1.n_qubits() != s2.n_qubits()) {
        throw std::invalid_argument("fidelity of states with different qubit counts");
    }
    Complex overlap = 0;
    for (size_t i = 0; i < s1.amplitudes().size(); i++) {
        overlap += std::conj(s1.amplitude(i)) * s2.amplitude(i);
    }
    return std::norm(overlap);
}

StateVector extract_qubit(const StateVector &state, int qubit) {
    check_qubit(state, qubit);
    size_t mask = qubit_mask(state.n_qubits(), qubit);
    size_t best = 0;
    double best_weight = -1;
    for (size_t r = 0; r < state.amplitudes().size(); r++) {
        if (r & mask) {
            continue;
        }
        double w = std::norm(state.amplitude(r)) + std::norm(state.amplitude(r | mask));
        if (w > best_weight) {
            best_weight = w;
            best = r;
        }
    }
    Complex a0 = state.amplitude(best);
    Complex a1 = state.amplitude(best | mask);
    double n = std::sqrt(std::norm(a0) + std::norm(a1));
    a0 /= n;
    a1 /= n;
    // For a product state every slice is proportional to (a0, a1).
    double captured = 0;
    for (size_t r = 0; r < state.amplitudes().size(); r++) {
        if (r & mask) {
            continue;
        }
        captured += std::norm(std::conj(a0) * state.amplitude(r) + std::conj(a1) * state.amplitude(r | mask));
    }
    if (std::abs(captured - 1) > kStateTolerance) {
        throw std::logic_error("qubit " + std::to_string(qubit) + " is entangled with the rest of the state");
    }
    return StateVector::from_amplitudes({a0, a1});
}

}  // namespace qpc
