/*
   Copyright 2026 The v2xsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Seed derivation and portable random streams.
//
// Every random draw in a campaign comes from a Stream seeded by
// stream_seed(snapshot_seed, purpose, key). The engine (std::mt19937_64) is
// fully specified by the standard; the distributions below are written out
// here because the <random> distributions are implementation-defined and
// would break cross-machine reproducibility.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

#include "v2xsim/errors.hpp"

namespace v2x {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based child seed: mix64(base XOR index * 0x9E3779B97F4A7C15).
/// For a fixed base this is a bijection of index, so children never collide.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept
{
    return mix64(base ^ (index * kGoldenGamma));
}

/// Randomness domains within one snapshot.
enum class Purpose : std::uint64_t {
    placement = 1,
    offsets = 2,
    backoff = 3,
    shadow = 4,
    los = 5,
};

constexpr std::uint64_t stream_seed(std::uint64_t snapshot_seed, Purpose purpose,
                                    std::uint64_t key = 0) noexcept
{
    return derive_seed(derive_seed(snapshot_seed, static_cast<std::uint64_t>(purpose)), key);
}

/// Key for an unordered node pair, identical for (a, b) and (b, a).
constexpr std::uint64_t pair_key(std::uint64_t a, std::uint64_t b) noexcept
{
    const auto lo = a < b ? a : b;
    const auto hi = a < b ? b : a;
    return (lo << 32) | (hi & 0xFFFFFFFFULL);
}

class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Unbiased uniform integer in [lo, hi] by rejection.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
    {
        if (hi < lo) {
            throw InvalidParameter("uniform_int: empty range");
        }
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) {
            return static_cast<std::int64_t>(engine_());
        }
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return lo + static_cast<std::int64_t>(r % span);
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal by Box-Muller; the second variate is cached.
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    /// Poisson count. Means above 500 are split into chunks so exp(-mean)
    /// never underflows in the multiplication method.
    std::uint64_t poisson(double mean)
    {
        if (!(mean >= 0.0) || !std::isfinite(mean)) {
            throw InvalidParameter("poisson: mean must be finite and >= 0");
        }
        std::uint64_t total = 0;
        while (mean > 0.0) {
            const double chunk = mean > 500.0 ? 500.0 : mean;
            mean -= chunk;
            const double limit = std::exp(-chunk);
            double prod = uniform();
            while (prod > limit) {
                ++total;
                prod *= uniform();
            }
        }
        return total;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace v2x
