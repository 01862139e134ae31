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

#include "qpc/pauli_bell.h"

#include <stdexcept>

namespace qpc {

namespace {

// i^k Z^z X^x, used only to multiply Paulis with their phases.
struct PhasedPauli {
    uint8_t k = 0;
    bool z = false;
    bool x = false;
};

PhasedPauli to_phased(SignedPauli p) {
    uint8_t k = p.negative ? 2 : 0;
    if (p.pauli.z_exp && p.pauli.x_exp) {
        k += 3;  // Y = i^3 Z X
    }
    return {static_cast<uint8_t>(k & 3), p.pauli.z_exp, p.pauli.x_exp};
}

SignedPauli to_signed(PhasedPauli p) {
    uint8_t k = p.k;
    if (p.z && p.x) {
        k += 1;  // remove the i^3 that makes ZX Hermitian
    }
    k &= 3;
    if (k & 1) {
        throw std::logic_error("Pauli product is not Hermitian");
    }
    return {PauliLabel{p.z, p.x}, k == 2};
}

PhasedPauli multiply(PhasedPauli a, PhasedPauli b) {
    // Z^z1 X^x1 Z^z2 X^x2 = (-1)^(x1 z2) Z^(z1+z2) X^(x1+x2)
    uint8_t k = a.k + b.k + ((a.x && b.z) ? 2 : 0);
    return {static_cast<uint8_t>(k & 3), a.z != b.z, a.x != b.x};
}

constexpr std::array<SignedPauli, 6> kSignedAxes = {{
    {kPauliX, false},
    {kPauliX, true},
    {kPauliZ, false},
    {kPauliZ, true},
    {kPauliZX, false},
    {kPauliZX, true},
}};

}  // namespace

std::string BellLabel::str() const {
    return std::string{phase ? '1' : '0', parity ? '1' : '0'};
}

std::optional<BellLabel> BellLabel::parse(std::string_view text) {
    if (text.size() != 2) {
        return std::nullopt;
    }
    for (char c : text) {
        if (c != '0' && c != '1') {
            return std::nullopt;
        }
    }
    return BellLabel{text[0] == '1', text[1] == '1'};
}

std::string PauliLabel::str() const {
    static constexpr const char *kNames[] = {"I", "X", "Z", "ZX"};
    return kNames[code()];
}

std::optional<PauliLabel> PauliLabel::parse(std::string_view text) {
    if (text == "I") {
        return kPauliI;
    }
    if (text == "X") {
        return kPauliX;
    }
    if (text == "Z") {
        return kPauliZ;
    }
    if (text == "ZX") {
        return kPauliZX;
    }
    return std::nullopt;
}

std::string SignedPauli::str() const {
    static constexpr const char *kNames[] = {"I", "X", "Z", "Y"};
    return std::string(negative ? "-" : "+") + kNames[pauli.code()];
}

CliffordOp::CliffordOp() : x_image_{kPauliX, false}, z_image_{kPauliZ, false} {
}

CliffordOp::CliffordOp(SignedPauli x_image, SignedPauli z_image) : x_image_(x_image), z_image_(z_image) {
}

CliffordOp CliffordOp::from_images(SignedPauli x_image, SignedPauli z_image) {
    if (x_image.pauli.is_identity() || z_image.pauli.is_identity() || x_image.pauli == z_image.pauli) {
        throw std::invalid_argument("Clifford images of X and Z must be anticommuting non-identity Paulis");
    }
    return CliffordOp(x_image, z_image);
}

const std::array<CliffordOp, CliffordOp::kGroupSize> &CliffordOp::all() {
    static const std::array<CliffordOp, kGroupSize> table = [] {
        std::array<CliffordOp, kGroupSize> result;
        size_t k = 0;
        for (const auto &x_image : kSignedAxes) {
            for (const auto &z_image : kSignedAxes) {
                if (x_image.pauli == z_image.pauli) {
                    continue;
                }
                result[k++] = CliffordOp(x_image, z_image);
            }
        }
        return result;
    }();
    return table;
}

CliffordOp CliffordOp::from_index(int index) {
    if (index < 0 || index >= kGroupSize) {
        throw std::out_of_range("Clifford index must be in [0, 24)");
    }
    return all()[index];
}

CliffordOp CliffordOp::hadamard() {
    return CliffordOp({kPauliZ, false}, {kPauliX, false});
}

CliffordOp CliffordOp::phase_s() {
    return CliffordOp({kPauliZX, false}, {kPauliZ, false});
}

int CliffordOp::index() const {
    const auto &table = all();
    for (int k = 0; k < kGroupSize; k++) {
        if (table[k] == *this) {
            return k;
        }
    }
    throw std::logic_error("Clifford element missing from canonical table");
}

SignedPauli CliffordOp::forward(SignedPauli p) const {
    PhasedPauli in = to_phased(p);
    PhasedPauli out{in.k, false, false};
    if (in.z) {
        out = multiply(out, to_phased(z_image_));
    }
    if (in.x) {
        out = multiply(out, to_phased(x_image_));
    }
    return to_signed(out);
}

SignedPauli CliffordOp::backward(SignedPauli p) const {
    return inverse().forward(p);
}

CliffordOp CliffordOp::inverse() const {
    for (const auto &candidate : all()) {
        if (candidate * *this == CliffordOp()) {
            return candidate;
        }
    }
    throw std::logic_error("Clifford element has no inverse in the table");
}

CliffordOp operator*(const CliffordOp &a, const CliffordOp &b) {
    return CliffordOp(a.forward(b.x_image_), a.forward(b.z_image_));
}

BellLabel apply_pauli_to_label(BellLabel label, PauliLabel p) {
    return BellLabel{label.phase != p.z_exp, label.parity != p.x_exp};
}

BellLabel swap_labels(BellLabel a, BellLabel b, BellLabel m) {
    return BellLabel::from_code(a.code() ^ b.code() ^ m.code());
}

TeleportCorrection teleport_correction(BellLabel shared, BellLabel bsm) {
    return TeleportCorrection{shared.phase != bsm.phase, shared.parity != bsm.parity};
}

PauliLabel reveal_pauli(BellLabel committed) {
    return PauliLabel{!committed.phase, committed.parity};
}

PauliLabel compose_paulis(PauliLabel p, PauliLabel q) {
    return PauliLabel::from_code(p.code() ^ q.code());
}

SignedPauli conjugate_pauli(const CliffordOp &u, PauliLabel p) {
    return u.backward(SignedPauli{p, false});
}

}  // namespace qpc
