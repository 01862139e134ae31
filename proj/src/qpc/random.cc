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

#include "qpc/random.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpc {

uint64_t derive_seed(uint64_t master, uint64_t index) {
    uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

bool RandomStream::bit() {
    return (engine_() >> 63) != 0;
}

uint64_t RandomStream::below(uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("below(0)");
    }
    // Reject the top partial bucket.
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    while (true) {
        uint64_t r = engine_();
        if (r < limit) {
            return r % n;
        }
    }
}

double RandomStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

size_t RandomStream::sample_index(std::span<const double> probabilities) {
    if (probabilities.empty()) {
        throw std::invalid_argument("sample_index needs at least one outcome");
    }
    double r = uniform();
    double acc = 0;
    size_t last_nonzero = 0;
    for (size_t k = 0; k < probabilities.size(); k++) {
        if (probabilities[k] > 0) {
            last_nonzero = k;
        }
        acc += probabilities[k];
        if (r < acc) {
            return k;
        }
    }
    // Rounding left r above the accumulated total.
    return last_nonzero;
}

}  // namespace qpc
