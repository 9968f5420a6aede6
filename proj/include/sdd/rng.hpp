#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace sdd {

// All randomness in the pipeline flows through these helpers on top of
// std::mt19937_64.  std::uniform_int_distribution and std::shuffle are
// implementation-defined, so bounded draws and shuffles are done by hand to
// keep seeded runs byte-identical across toolchains.

using Rng = std::mt19937_64;

// Unbiased-enough bounded draw via 128-bit multiply (Lemire reduction).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    const unsigned __int128 wide = static_cast<unsigned __int128>(rng()) * bound;
    return static_cast<std::uint64_t>(wide >> 64);
}

inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle_in_place(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Derives an independent child seed from a master seed and a role tag, so
// parallel and sequential executions of the same plan agree.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return splitmix64(seed ^ h);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag,
                                 std::uint64_t index) {
    return splitmix64(derive_seed(seed, tag) + index);
}

}  // namespace sdd
