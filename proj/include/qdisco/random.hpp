// Copyright 2026 The qdisco Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace qdisco {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive independent child seeds by counter.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream, std::uint64_t counter = 0) {
    return mix_seed(mix_seed(parent ^ mix_seed(stream)) + counter);
}

// Distribution objects in <random> are implementation-defined; these are not.

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform_in(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Uniform integer in [0, n), n > 0, by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

// Stream tags for derive_seed.
namespace streams {
inline constexpr std::uint64_t kSample = 1;
inline constexpr std::uint64_t kTrajectory = 2;
inline constexpr std::uint64_t kOptimizerInit = 3;
inline constexpr std::uint64_t kPartition = 4;
inline constexpr std::uint64_t kRegions = 5;
inline constexpr std::uint64_t kReference = 6;
inline constexpr std::uint64_t kBenchmark = 7;
inline constexpr std::uint64_t kLeaf = 8;
inline constexpr std::uint64_t kMerge = 9;
inline constexpr std::uint64_t kTopology = 10;
}  // namespace streams

}  // namespace qdisco
