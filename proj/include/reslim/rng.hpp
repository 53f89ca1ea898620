#pragma once

#include <cstdint>
#include <random>

namespace reslim {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream for (experiment, replica). Same key, same stream.
inline Rng stream(std::uint64_t experiment, std::uint64_t replica) {
    std::uint64_t k = splitmix64(splitmix64(experiment) ^ (replica + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32),
                      static_cast<std::uint32_t>(experiment), static_cast<std::uint32_t>(replica)};
    return Rng(seq);
}

}  // namespace reslim
