#pragma once

#include <cstdint>
#include <random>

namespace seqweight {

// Identifier of the sub-seed derivation scheme, recorded in run manifests so
// a result file pins down exactly how replication streams were produced.
inline constexpr const char* kSeedDerivationId = "splitmix64-counter-v1";

// splitmix64 finalizer (Steele, Lea & Flood / Vigna).
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based sub-seed: replication streams are indexed, not sequential,
// so any subset of replications can run on any worker in any order.
constexpr std::uint64_t derive_subseed(std::uint64_t master_seed, std::uint64_t counter) {
    return splitmix64(master_seed + (counter + 1) * 0x9e3779b97f4a7c15ULL);
}

inline std::mt19937_64 make_substream(std::uint64_t master_seed, std::uint64_t counter) {
    return std::mt19937_64(derive_subseed(master_seed, counter));
}

// Uniform double in [0, 1) from the top 53 bits of one engine output.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Fixed-point multiply; bias is O(n / 2^64).
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

}  // namespace seqweight
