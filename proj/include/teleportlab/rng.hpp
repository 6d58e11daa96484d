// Copyright 2026 The teleportlab Authors
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

// Counter-based random streams. Output i of a stream is a pure function of
// (key, i), so streams can be split, replayed, and consumed from any thread
// that owns them without shared state.

#include <cstdint>
#include <vector>

#include "teleportlab/tensor.hpp"

namespace teleportlab {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

    std::uint64_t key() const { return key_; }
    std::uint64_t position() const { return counter_; }

    std::uint64_t next_u64() {
        const auto c = counter_++;
        return mix64(key_ + mix64(c + 0x9e3779b97f4a7c15ULL));
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (one draw per call, two uniforms consumed).
    double normal();

    /// Independent child stream; depends only on this stream's key and `stream`.
    CounterRng split(std::uint64_t stream) const {
        return CounterRng(key_ ^ mix64(stream + 0xd1b54a32d192ed03ULL), Raw{});
    }

    /// Draws an index from a discrete distribution given by `weights`
    /// (need not be normalized; must have positive sum).
    std::size_t pick(const std::vector<double>& weights);

private:
    struct Raw {};
    CounterRng(std::uint64_t key, Raw) : key_(key) {}

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Haar-distributed pure state on `shape` (normalized complex Gaussian vector).
PureState random_state(const RegisterShape& shape, CounterRng& rng);

}  // namespace teleportlab
