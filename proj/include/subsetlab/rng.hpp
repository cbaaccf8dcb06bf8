#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace subsetlab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Engine for (seed, stream). The mapping is a pure function of both values,
/// so any partition of work across streams reproduces the same draws no
/// matter how many workers consume them.
inline std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t state = seed ^ (0x6a09e667f3bcc909ull + stream * 0x9e3779b97f4a7c15ull);
    const std::uint64_t a = splitmix64(state);
    const std::uint64_t b = splitmix64(state);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

/// Unbiased uniform draw in [0, bound) via rejection. The standard engines
/// are bit-specified across platforms; std::uniform_int_distribution is not,
/// and sampled values get frozen into tests.
inline std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("uniform_below bound must be positive");
    }
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    std::uint64_t draw = engine();
    while (draw < threshold) {
        draw = engine();
    }
    return draw % bound;
}

template <class T>
void deterministic_shuffle(std::vector<T>& values, std::mt19937_64& engine) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::swap(values[i - 1], values[uniform_below(engine, i)]);
    }
}

}  // namespace subsetlab
