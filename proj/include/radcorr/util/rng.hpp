#pragma once

#include <cstdint>
#include <random>

namespace radcorr::util {

/// splitmix64 step; used to derive independent stream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic per-task seed: hash-mix the master seed with up to three
/// task indices. Streams for distinct indices are independent for any
/// practical purpose, and the mapping is stable across runs and platforms.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = master;
    splitmix64(s);
    s ^= 0x632be59bd9b4e019ULL + a;
    splitmix64(s);
    s ^= 0x9e6c63d0a0d6f7a1ULL + b;
    splitmix64(s);
    s ^= 0xd6e8feb86659fd93ULL + c;
    return splitmix64(s);
}

/// RNG engine used throughout; one instance per task, never shared.
inline std::mt19937_64 make_engine(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      0x2545f491u, 0x4f6cdd1du};
    return std::mt19937_64(seq);
}

} // namespace radcorr::util
