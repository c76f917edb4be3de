#pragma once

#include <cstdint>
#include <random>

namespace mfpotts {

/// Seed of a deterministic stream; identical seeds give identical sample paths.
struct RngSeed {
    std::uint64_t value = 0;
};

using Engine = std::mt19937_64;

/// Independent stream for chain `chain` derived from (seed, chain).
inline Engine make_stream(RngSeed seed, std::uint64_t chain = 0) {
    auto splitmix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    const std::uint64_t a = splitmix(seed.value);
    const std::uint64_t b = splitmix(a ^ splitmix(chain + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Engine(seq);
}

/// Uniform double in [0, 1) from the top 53 bits; portable across standard libraries.
inline double uniform01(Engine& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n).
inline int uniform_below(Engine& g, int n) {
    const int v = static_cast<int>(uniform01(g) * n);
    return v < n ? v : n - 1;
}

}  // namespace mfpotts
