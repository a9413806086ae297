// Copyright 2026 The wcpi Authors
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

#ifndef WCPI_RNG_H
#define WCPI_RNG_H

#include <bit>
#include <cstdint>
#include <random>

namespace wcpi {

struct RngSeed {
    uint64_t value = 0;
};

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for the stream that simulates the grid point at `dx_mm`. Keyed on the
/// value (not the index) so that results do not depend on grid order.
inline uint64_t point_stream_seed(RngSeed seed, double dx_mm) {
    double canonical = dx_mm + 0.0;  // folds -0.0 into +0.0
    return mix64(mix64(seed.value) ^ std::bit_cast<uint64_t>(canonical));
}

/// 64-bit Mersenne twister with a portable uniform draw (the std
/// distributions are implementation-defined, this one is not).
class Rng {
   public:
    explicit Rng(uint64_t seed) : engine_(seed) {
    }

    uint64_t next_u64() {
        return engine_();
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1]; safe to take the logarithm of.
    double uniform_open_zero() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    std::mt19937_64 &engine() {
        return engine_;
    }

   private:
    std::mt19937_64 engine_;
};

}  // namespace wcpi

#endif
