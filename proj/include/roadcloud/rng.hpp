/*
 * Copyright 2026 The roadcloud Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace roadcloud {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

/// Deterministic splittable random stream (xoshiro256++ seeded through
/// SplitMix64). A stream is fully identified by (master seed, replication,
/// stream id); distinct triples yield statistically independent streams, so
/// replications and event types can be reordered or parallelized without
/// changing any drawn value.
class SplitRng {
public:
    SplitRng(std::uint64_t master_seed, std::uint64_t replication, std::uint64_t stream_id) {
        std::uint64_t mix = master_seed;
        mix ^= 0xA5A5A5A5A5A5A5A5ULL + detail::splitmix64(mix) + (replication << 1);
        mix ^= 0xC6A4A7935BD1E995ULL * (stream_id + 1);
        for (auto& word : state_) {
            word = detail::splitmix64(mix);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

    /// Exponential variate with the given rate (mean 1/rate).
    double exponential(double rate) {
        if (rate <= 0.0) {
            throw std::invalid_argument("exponential rate must be > 0");
        }
        // 1 - u lies in (0, 1], so the log is finite.
        return -std::log(1.0 - next_unit()) / rate;
    }

    bool bernoulli(double p) {
        return next_unit() < p;
    }

private:
    std::uint64_t state_[4];
};

} // namespace roadcloud
