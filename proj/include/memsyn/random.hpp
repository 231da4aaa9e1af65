/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace memsyn {

/// splitmix64 step; used for seeding and stream derivation.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a hash of a stream label. Labels give every random-consuming
/// mechanism (inputs, teacher, device redraws, Bernoulli gates, ...) its own
/// substream, so toggling one mechanism cannot perturb the others.
constexpr std::uint64_t stream_label(std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 0x100000001b3ULL;
    }
    return h;
}

/**
 * Seeded xoshiro256++ stream with deterministic substream derivation.
 *
 * All randomness in the project flows through this generator so that runs
 * are bit-reproducible across platforms (no reliance on libstdc++
 * distribution internals). Each logical mechanism derives its own child
 * stream from the master seed via substream().
 */
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed) : seed_(seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<std::uint64_t>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller. One variate per call, nothing cached,
    /// so interleaved calls from different code paths stay reproducible.
    double gaussian() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    double gaussian(double mean, double std_dev) { return mean + std_dev * gaussian(); }

    /// Poisson count by Knuth's product method; adequate for the mean ranges
    /// a single timestep produces (rate * dt well below ~50).
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }

    /// Child stream derived from the master seed and a label; independent of
    /// how much the parent has been consumed.
    RandomStream substream(std::uint64_t label) const {
        std::uint64_t sm = seed_ ^ (0x9e3779b97f4a7c15ULL * (label | 1ULL));
        std::uint64_t child = splitmix64_next(sm);
        child ^= splitmix64_next(sm);
        return RandomStream(child);
    }

    RandomStream substream(std::string_view name) const { return substream(stream_label(name)); }

    /// Two-level derivation for per-trial / per-worker streams.
    RandomStream substream(std::uint64_t label, std::uint64_t index) const {
        return substream(label ^ (0xd1342543de82ef95ULL * (index + 1)));
    }

    RandomStream substream(std::string_view name, std::uint64_t index) const {
        return substream(stream_label(name), index);
    }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t seed_;
    std::uint64_t state_[4];
};

}  // namespace memsyn
