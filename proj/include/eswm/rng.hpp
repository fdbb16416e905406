#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace eswm {

// All randomness in the project flows through these helpers so that a run is
// a pure function of its master seed. Distributions are hand-rolled on top of
// mt19937_64 instead of <random> distribution objects, whose output sequences
// are implementation-defined.

using RngEngine = std::mt19937_64;

/// SplitMix64 finalizer; full-period mixing of a 64-bit state.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent child seed from (base, stream). Used to split the
/// master seed into per-replication, per-epoch and per-purpose streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream ^ 0x5851f42d4c957f2dULL));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
    return derive_seed(derive_seed(base, stream), index);
}

inline RngEngine make_engine(std::uint64_t seed) {
    return RngEngine(splitmix64(seed));
}

/// Uniform draw in [0, 1) with 53 random bits.
inline double uniform01(RngEngine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform draw in [lo, hi); degenerate ranges return lo.
inline double uniform_in(RngEngine& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Exponential draw with the given rate (mean 1/rate).
inline double exponential(RngEngine& rng, double rate) {
    // log1p keeps precision near u = 0; u < 1 guarantees a finite result.
    return -std::log1p(-uniform01(rng)) / rate;
}

/// Uniform index in [0, count); count must be positive.
inline std::size_t uniform_index(RngEngine& rng, std::size_t count) {
    auto idx = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(count));
    return idx < count ? idx : count - 1;
}

} // namespace eswm
