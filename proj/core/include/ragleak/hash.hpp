#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ragleak {

// FNV-1a, 64 bit. Platform-independent, used for feature hashing, content
// digests in event logs, and n-gram window fingerprints. Not cryptographic.
inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = kFnvOffset) {
    std::uint64_t h = seed;
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= kFnvPrime;
    }
    return h;
}

/// Mixes an integer into an existing hash state.
constexpr std::uint64_t fnv1a64_mix(std::uint64_t h, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
        h ^= value & 0xffu;
        h *= kFnvPrime;
        value >>= 8;
    }
    return h;
}

/// splitmix64 finalizer; used to derive independent sub-seeds from one seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// 16-char lowercase hex digest of fnv1a64(data), for event-log hashes.
std::string content_digest(std::string_view data);

}  // namespace ragleak
