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

#include <cmath>

#include "gtest/gtest.h"

#include "qpc/oracle.test.h"

using namespace qpc;

static const double r = 1 / std::sqrt(2.0);

static void expect_amplitudes(const StateVector &s, std::vector<Complex> expected) {
    ASSERT_EQ(s.amplitudes().size(), expected.size());
    for (size_t k = 0; k < expected.size(); k++) {
        ASSERT_NEAR(std::abs(s.amplitude(k) - expected[k]), 0, 1e-12) << "index " << k;
    }
}

static StateVector from_oracle(const oracle::Vec &v) {
    return StateVector::from_amplitudes(oracle::normalized(v));
}

TEST(statevector, prepare_bell) {
    expect_amplitudes(prepare_bell({false, false}), {r, 0, 0, r});
    expect_amplitudes(prepare_bell({true, true}), {0, r, -r, 0});
    expect_amplitudes(prepare_bell({false, true}), {0, r, r, 0});
    expect_amplitudes(prepare_bell({true, false}), {r, 0, 0, -r});
}

TEST(statevector, from_amplitudes_validates) {
    ASSERT_THROW(StateVector::from_amplitudes({1, 0, 0}), std::invalid_argument);
    ASSERT_THROW(StateVector::from_amplitudes({1, 1}), std::invalid_argument);
    ASSERT_THROW(StateVector::from_amplitudes({}), std::invalid_argument);
    ASSERT_THROW(StateVector::basis(13), std::invalid_argument);
    ASSERT_NO_THROW(StateVector::from_amplitudes({r, Complex(0, r)}));
}

TEST(statevector, big_endian_order) {
    auto s = StateVector::basis(1, 1).tensor(StateVector::basis(2, 0));
    ASSERT_EQ(s.n_qubits(), 3);
    ASSERT_EQ(s.amplitude(4), Complex(1));
}

TEST(statevector, apply_single_qubit) {
    auto s = StateVector::basis(1, 0);
    ASSERT_EQ(apply_single_qubit(s, 0, Unitary2::identity()).amplitudes()[0], Complex(1));
    expect_amplitudes(apply_single_qubit(s, 0, Unitary2::pauli_x()), {0, 1});
    auto hzh = Unitary2::hadamard() * Unitary2::pauli_z() * Unitary2::hadamard();
    for (size_t b = 0; b < 4; b++) {
        auto basis = StateVector::basis(2, b);
        for (int q = 0; q < 2; q++) {
            auto a = apply_single_qubit(basis, q, hzh);
            auto x = apply_single_qubit(basis, q, Unitary2::pauli_x());
            ASSERT_NEAR(fidelity(a, x), 1, kStateTolerance);
        }
    }
    ASSERT_THROW(apply_single_qubit(s, 1, Unitary2::pauli_x()), std::out_of_range);
    ASSERT_THROW(apply_single_qubit(s, -1, Unitary2::pauli_x()), std::out_of_range);
}

TEST(statevector, norm_preserved) {
    RandomStream rng(5);
    auto s = StateVector::basis(4, 3);
    for (int k = 0; k < 50; k++) {
        s = apply_single_qubit(s, static_cast<int>(rng.below(4)), random_unitary(rng));
        ASSERT_NEAR(s.norm(), 1, kStateTolerance);
    }
    auto m = bsm(s, 0, 2, OutcomeSource<BellLabel>::sample(rng));
    ASSERT_NEAR(m.collapsed->norm(), 1, kStateTolerance);
    auto c = measure_computational(s, 1, OutcomeSource<bool>::sample(rng));
    ASSERT_NEAR(c.collapsed->norm(), 1, kStateTolerance);
}

TEST(statevector, bsm_on_bell_state) {
    for (uint8_t c = 0; c < 4; c++) {
        auto label = BellLabel::from_code(c);
        RandomStream rng(c);
        auto m = bsm(prepare_bell(label), 0, 1, OutcomeSource<BellLabel>::sample(rng));
        ASSERT_EQ(m.outcome, label);
        ASSERT_NEAR(m.probability, 1, kStateTolerance);
        auto other = bsm(prepare_bell(label), 0, 1, OutcomeSource<BellLabel>::forced(BellLabel::from_code(c ^ 1)));
        ASSERT_FALSE(other.collapsed.has_value());
        ASSERT_NEAR(other.probability, 0, kStateTolerance);
    }
}

TEST(statevector, bsm_probabilities_sum_to_one) {
    RandomStream rng(11);
    for (int trial = 0; trial < 20; trial++) {
        auto s = StateVector::basis(3, rng.below(8));
        for (int q = 0; q < 3; q++) {
            s = apply_single_qubit(s, q, random_unitary(rng));
        }
        auto p = bell_probabilities(s, 2, 0);
        ASSERT_NEAR(p[0] + p[1] + p[2] + p[3], 1, kStateTolerance);
    }
    ASSERT_THROW(bell_probabilities(StateVector::basis(2), 1, 1), std::invalid_argument);
}

TEST(statevector, swap_outcomes_uniform) {
    for (uint8_t a = 0; a < 4; a++) {
        for (uint8_t b = 0; b < 4; b++) {
            auto s = prepare_bell(BellLabel::from_code(a)).tensor(prepare_bell(BellLabel::from_code(b)));
            auto p = bell_probabilities(s, 1, 3);
            for (double x : p) {
                ASSERT_NEAR(x, 0.25, kStateTolerance);
            }
        }
    }
}

TEST(statevector, enumeration_matches_sampling) {
    RandomStream prep(3);
    auto s = StateVector::basis(3);
    for (int q = 0; q < 3; q++) {
        s = apply_single_qubit(s, q, random_unitary(prep));
    }
    auto enumerated = bell_probabilities(s, 0, 1);
    for (uint8_t c = 0; c < 4; c++) {
        auto forced = bsm(s, 0, 1, OutcomeSource<BellLabel>::forced(BellLabel::from_code(c)));
        ASSERT_NEAR(forced.probability, enumerated[c], 1e-12);
    }
    RandomStream rng(4);
    const int samples = 20000;
    std::array<int, 4> counts{};
    for (int k = 0; k < samples; k++) {
        counts[bsm(s, 0, 1, OutcomeSource<BellLabel>::sample(rng)).outcome.code()]++;
    }
    for (int c = 0; c < 4; c++) {
        double p = enumerated[c];
        double se = std::sqrt(p * (1 - p) / samples);
        ASSERT_LE(std::abs(counts[c] / double(samples) - p), 4 * se + 1e-12) << "outcome " << c;
    }
}

TEST(statevector, measure_computational) {
    RandomStream rng(0);
    auto zero = measure_computational(StateVector::basis(1), 0, OutcomeSource<bool>::sample(rng));
    ASSERT_FALSE(zero.outcome);
    ASSERT_NEAR(zero.probability, 1, kStateTolerance);

    auto plus = apply_single_qubit(StateVector::basis(1), 0, Unitary2::hadamard());
    auto forced = measure_computational(plus, 0, OutcomeSource<bool>::forced(false));
    ASSERT_NEAR(forced.probability, 0.5, kStateTolerance);

    auto minus = StateVector::from_amplitudes({r, -r});
    auto one = measure_computational(apply_single_qubit(minus, 0, Unitary2::hadamard()), 0,
                                     OutcomeSource<bool>::sample(rng));
    ASSERT_TRUE(one.outcome);
    ASSERT_NEAR(one.probability, 1, kStateTolerance);
}

TEST(statevector, fidelity) {
    RandomStream rng(9);
    auto s = apply_single_qubit(StateVector::basis(2, 1), 0, random_unitary(rng));
    ASSERT_NEAR(fidelity(s, s), 1, kStateTolerance);
    ASSERT_NEAR(fidelity(StateVector::basis(1, 0), StateVector::basis(1, 1)), 0, kStateTolerance);
    for (double theta : {0.3, 1.7, -2.5}) {
        Unitary2 phase;
        phase.m = {std::polar(1.0, theta), 0, 0, std::polar(1.0, theta)};
        ASSERT_NEAR(fidelity(s, apply_single_qubit(s, 1, phase)), 1, kStateTolerance);
    }
    ASSERT_THROW(fidelity(StateVector::basis(1), StateVector::basis(2)), std::invalid_argument);
}

TEST(statevector, random_unitary_is_unitary) {
    RandomStream rng(1);
    for (int k = 0; k < 100; k++) {
        ASSERT_TRUE(random_unitary(rng).is_unitary());
    }
}

TEST(statevector, extract_qubit) {
    auto s = StateVector::from_amplitudes({r, Complex(0, r)}).tensor(prepare_bell({true, false}));
    auto q = extract_qubit(s, 0);
    ASSERT_NEAR(fidelity(q, StateVector::from_amplitudes({r, Complex(0, r)})), 1, kStateTolerance);
    ASSERT_THROW(extract_qubit(s, 1), std::logic_error);
}

TEST(statevector, teleport_haar_state_self_test) {
    RandomStream rng(2024);
    for (int trial = 0; trial < 20; trial++) {
        auto input = apply_single_qubit(StateVector::basis(1), 0, random_unitary(rng));
        // qubit 0: input, 1: sender's half, 2: receiver's half.
        auto s = input.tensor(prepare_bell({false, false}));
        auto m = bsm(s, 0, 1, OutcomeSource<BellLabel>::forced({false, false}));
        ASSERT_TRUE(m.collapsed.has_value());
        ASSERT_NEAR(m.probability, 0.25, kStateTolerance);
        ASSERT_NEAR(fidelity(extract_qubit(*m.collapsed, 2), input), 1, kStateTolerance);
    }
}

TEST(unitary2, pauli_and_clifford_matrices) {
    ASSERT_LT(Unitary2::from_pauli(kPauliZX).distance(Unitary2::pauli_z() * Unitary2::pauli_x()), 1e-12);
    ASSERT_LT(Unitary2::from_signed_pauli({kPauliZX, false}).distance(Unitary2::pauli_y()), 1e-12);
    ASSERT_LT(clifford_matrix(CliffordOp()).distance_up_to_phase(Unitary2::identity()), 1e-12);
    ASSERT_LT(clifford_matrix(CliffordOp::hadamard()).distance_up_to_phase(Unitary2::hadamard()), 1e-12);
    ASSERT_LT(clifford_matrix(CliffordOp::phase_s()).distance_up_to_phase(Unitary2::phase_s()), 1e-12);
    for (const auto &op : CliffordOp::all()) {
        const auto &u = clifford_matrix(op);
        ASSERT_TRUE(u.is_unitary());
        auto x = u * Unitary2::pauli_x() * u.adjoint();
        auto z = u * Unitary2::pauli_z() * u.adjoint();
        ASSERT_LT(x.distance(Unitary2::from_signed_pauli(op.x_image())), 1e-12);
        ASSERT_LT(z.distance(Unitary2::from_signed_pauli(op.z_image())), 1e-12);
    }
}

// ---------------------------------------------------------------------------
// Symbolic rules against the independent test-side oracle.

TEST(oracle_equivalence, swap_labels_64_cases) {
    for (uint8_t a = 0; a < 4; a++) {
        for (uint8_t b = 0; b < 4; b++) {
            // qubits: 0 = A, 1 = C1, 2 = B, 3 = C2
            auto v = oracle::kron(oracle::bell(BellLabel::from_code(a)), oracle::bell(BellLabel::from_code(b)));
            for (uint8_t m = 0; m < 4; m++) {
                auto la = BellLabel::from_code(a);
                auto lb = BellLabel::from_code(b);
                auto lm = BellLabel::from_code(m);
                auto residual = oracle::project_pair(v, 4, 1, 3, lm);
                ASSERT_NEAR(oracle::norm2(residual), 0.25, 1e-12);
                auto expected = oracle::bell(swap_labels(la, lb, lm));
                ASSERT_GE(oracle::fidelity(residual, expected), 1 - 1e-9) << la.str() << lb.str() << lm.str();

                // The library's Bell measurement agrees with the oracle.
                auto s = from_oracle(v);
                auto measured = bsm(s, 1, 3, OutcomeSource<BellLabel>::forced(lm));
                ASSERT_NEAR(measured.probability, 0.25, 1e-12);
                auto probabilities = bell_probabilities(*measured.collapsed, 0, 2);
                ASSERT_GE(probabilities[swap_labels(la, lb, lm).code()], 1 - 1e-9);
            }
        }
    }
}

TEST(oracle_equivalence, teleport_correction_16_cases) {
    RandomStream rng(77);
    std::vector<oracle::Vec> inputs = {oracle::basis(1, 0), oracle::basis(1, 1)};
    for (int k = 0; k < 3; k++) {
        auto u = random_unitary(rng);
        inputs.push_back({u.m[0], u.m[2]});
    }
    for (uint8_t shared = 0; shared < 4; shared++) {
        for (uint8_t outcome = 0; outcome < 4; outcome++) {
            auto ls = BellLabel::from_code(shared);
            auto lo = BellLabel::from_code(outcome);
            auto correction = teleport_correction(ls, lo);
            for (const auto &input : inputs) {
                // qubits: 0 = input, 1 = sender's half, 2 = receiver's half
                auto v = oracle::kron(input, oracle::bell(ls));
                auto received = oracle::project_pair(v, 3, 0, 1, lo);
                auto expected = oracle::apply(input, 1, 0, oracle::pauli_matrix(correction.as_pauli()));
                ASSERT_GE(oracle::fidelity(received, expected), 1 - 1e-9) << ls.str() << " " << lo.str();
            }
        }
    }
}

TEST(oracle_equivalence, reveal_pauli_4_cases) {
    for (uint8_t c = 0; c < 4; c++) {
        auto label = BellLabel::from_code(c);
        // sigma_z^(1 xor u_a) sigma_x^(u_c)
        oracle::Mat z_part = label.phase ? oracle::pauli_matrix(kPauliI) : oracle::pauli_matrix(kPauliZ);
        oracle::Mat x_part = label.parity ? oracle::pauli_matrix(kPauliX) : oracle::pauli_matrix(kPauliI);
        auto expected = oracle::matmul(z_part, x_part);
        auto actual = oracle::pauli_matrix(reveal_pauli(label));
        ASSERT_LT(oracle::distance_up_to_phase(expected, actual), 1e-12);
        // Undoing it restores any state.
        auto input = oracle::normalized({oracle::C(0.6), oracle::C(0, 0.8)});
        auto there = oracle::apply(input, 1, 0, actual);
        auto back = oracle::apply(there, 1, 0, oracle::dagger(actual));
        ASSERT_GE(oracle::fidelity(back, input), 1 - 1e-9);
    }
}

TEST(oracle_equivalence, pauli_side_independence) {
    for (uint8_t c = 0; c < 4; c++) {
        for (uint8_t p = 0; p < 4; p++) {
            auto label = BellLabel::from_code(c);
            auto pauli = PauliLabel::from_code(p);
            auto m = oracle::pauli_matrix(pauli);
            auto on_first = oracle::apply(oracle::bell(label), 2, 0, m);
            auto on_second = oracle::apply(oracle::bell(label), 2, 1, m);
            auto expected = oracle::bell(apply_pauli_to_label(label, pauli));
            ASSERT_GE(oracle::fidelity(on_first, on_second), 1 - 1e-9);
            ASSERT_GE(oracle::fidelity(on_first, expected), 1 - 1e-9);
        }
    }
}

TEST(oracle_equivalence, clifford_conjugation_24x4) {
    auto group = oracle::clifford_group();
    ASSERT_EQ(group.size(), 24u);

    auto conj = [](const oracle::Mat &u, const oracle::Mat &p) {
        return oracle::matmul(oracle::matmul(u, p), oracle::dagger(u));
    };
    auto exact = [](const oracle::Mat &a, const oracle::Mat &b) {
        double worst = 0;
        for (int k = 0; k < 4; k++) {
            worst = std::max(worst, std::abs(a[k] - b[k]));
        }
        return worst;
    };
    for (const auto &op : CliffordOp::all()) {
        const oracle::Mat *match = nullptr;
        for (const auto &u : group) {
            if (exact(conj(u, oracle::pauli_matrix(kPauliX)), oracle::signed_pauli_matrix(op.x_image())) < 1e-9 &&
                exact(conj(u, oracle::pauli_matrix(kPauliZ)), oracle::signed_pauli_matrix(op.z_image())) < 1e-9) {
                ASSERT_EQ(match, nullptr);
                match = &u;
            }
        }
        ASSERT_NE(match, nullptr) << "Clifford " << op.index();
        for (uint8_t c = 0; c < 4; c++) {
            auto p = PauliLabel::from_code(c);
            auto result = conjugate_pauli(op, p);
            auto expected = conj(oracle::dagger(*match), oracle::signed_pauli_matrix({p, false}));
            ASSERT_LT(exact(expected, oracle::signed_pauli_matrix(result)), 1e-9)
                << "Clifford " << op.index() << " on " << p.str();
        }
    }
}
