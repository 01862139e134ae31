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

#ifndef QPC_RANDOM_H
#define QPC_RANDOM_H

#include <cstdint>
#include <random>
#include <span>

namespace qpc {

/// Mixes a master seed with a stream index (splitmix64 finalizer) so that
/// per-trial and per-party streams are independent and reproducible.
uint64_t derive_seed(uint64_t master, uint64_t index);

/// A seeded mt19937_64 with draws built directly from its output bits, so
/// sequences do not depend on the standard library's distribution classes.
class RandomStream {
   public:
    explicit RandomStream(uint64_t seed) : engine_(seed) {
    }

    bool bit();
    /// Uniform in [0, n), unbiased. n must be positive.
    uint64_t below(uint64_t n);
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal (Box-Muller).
    double normal();
    /// Index drawn with the given probabilities, which should sum to 1.
    size_t sample_index(std::span<const double> probabilities);

   private:
    std::mt19937_64 engine_;
};

}  // namespace qpc

#endif
