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

#ifndef QPC_PAULI_BELL_H
#define QPC_PAULI_BELL_H

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qpc {

/// Label of one of the four Bell states
///
///     |phase parity> = (|0>|parity> + (-1)^phase |1>|1 xor parity>) / sqrt(2)
///
/// A Pauli applied to either qubit of the pair flips `phase` (Z component)
/// and/or `parity` (X component); global phase is not tracked.
struct BellLabel {
    bool phase = false;
    bool parity = false;

    constexpr uint8_t code() const {
        return static_cast<uint8_t>((phase << 1) | parity);
    }
    static constexpr BellLabel from_code(uint8_t code) {
        return BellLabel{(code & 2) != 0, (code & 1) != 0};
    }
    /// Two characters, phase then parity, e.g. "01".
    std::string str() const;
    static std::optional<BellLabel> parse(std::string_view text);

    constexpr bool operator==(const BellLabel &) const = default;
};

/// sigma_z^z_exp sigma_x^x_exp up to global phase.
struct PauliLabel {
    bool z_exp = false;
    bool x_exp = false;

    constexpr uint8_t code() const {
        return static_cast<uint8_t>((z_exp << 1) | x_exp);
    }
    static constexpr PauliLabel from_code(uint8_t code) {
        return PauliLabel{(code & 2) != 0, (code & 1) != 0};
    }
    constexpr bool is_identity() const {
        return !z_exp && !x_exp;
    }
    /// One of "I", "X", "Z", "ZX".
    std::string str() const;
    static std::optional<PauliLabel> parse(std::string_view text);

    constexpr bool operator==(const PauliLabel &) const = default;
};

inline constexpr PauliLabel kPauliI{false, false};
inline constexpr PauliLabel kPauliX{false, true};
inline constexpr PauliLabel kPauliZ{true, false};
inline constexpr PauliLabel kPauliZX{true, true};

/// A Hermitian Pauli (I, X, Y, Z) with a sign. The label (1,1) stands for Y
/// here, so `{kPauliZX, false}` is +Y, not sigma_z sigma_x (= iY).
struct SignedPauli {
    PauliLabel pauli;
    bool negative = false;

    std::string str() const;
    constexpr bool operator==(const SignedPauli &) const = default;
};

/// Single-qubit Clifford element modulo global phase, stored as the images
/// of X and Z under P -> U P U^dagger.
class CliffordOp {
   public:
    static constexpr int kGroupSize = 24;

    /// Identity.
    CliffordOp();

    /// Fails with std::invalid_argument unless the images are non-identity
    /// and anticommute.
    static CliffordOp from_images(SignedPauli x_image, SignedPauli z_image);
    static CliffordOp from_index(int index);
    static CliffordOp hadamard();
    static CliffordOp phase_s();

    /// All 24 elements in canonical index order (index 0 is the identity).
    static const std::array<CliffordOp, kGroupSize> &all();

    /// Canonical index in [0, 24).
    int index() const;

    const SignedPauli &x_image() const {
        return x_image_;
    }
    const SignedPauli &z_image() const {
        return z_image_;
    }

    /// U P U^dagger.
    SignedPauli forward(SignedPauli p) const;
    /// U^dagger P U.
    SignedPauli backward(SignedPauli p) const;

    CliffordOp inverse() const;

    /// Operator product: (a * b) acts as b first, then a.
    friend CliffordOp operator*(const CliffordOp &a, const CliffordOp &b);

    bool operator==(const CliffordOp &) const = default;

   private:
    CliffordOp(SignedPauli x_image, SignedPauli z_image);

    SignedPauli x_image_;
    SignedPauli z_image_;
};

BellLabel apply_pauli_to_label(BellLabel label, PauliLabel p);

/// Residual A-B label after a Bell measurement with outcome `m` on the C halves
/// of an A-C pair labelled `a` and a B-C pair labelled `b`.
BellLabel swap_labels(BellLabel a, BellLabel b, BellLabel m);

struct TeleportCorrection {
    bool k = false;
    bool k_prime = false;

    /// sigma_z^k sigma_x^k'.
    constexpr PauliLabel as_pauli() const {
        return PauliLabel{k, k_prime};
    }
    constexpr bool operator==(const TeleportCorrection &) const = default;
};

/// The receiver's qubit after teleportation through `shared` with sender
/// outcome `bsm` is sigma_z^k sigma_x^k' applied to the input state.
TeleportCorrection teleport_correction(BellLabel shared, BellLabel bsm);

/// sigma_z^(1 xor phase) sigma_x^parity.
PauliLabel reveal_pauli(BellLabel committed);

PauliLabel compose_paulis(PauliLabel p, PauliLabel q);

/// u^dagger p u, with p read as its Hermitian representative.
SignedPauli conjugate_pauli(const CliffordOp &u, PauliLabel p);

}  // namespace qpc

#endif
