#pragma once

// Seed derivation and the few sampling primitives whose exact bit pattern
// matters. The standard distributions are implementation-defined, so results
// are only reproducible across toolchains if these are used instead.

#include <cstdint>
#include <random>

namespace oppnet {

using Engine = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for an independent stream identified by `stream` under `base`.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
    return mix64(mix64(base) ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). Requires n > 0.
inline std::uint64_t uniform_index(Engine& engine, std::uint64_t n) {
    // Rejection on the largest multiple of n to avoid modulo bias.
    const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
    std::uint64_t x = engine();
    while (x >= limit) x = engine();
    return x % n;
}

} // namespace oppnet
