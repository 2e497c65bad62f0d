#pragma once

#include <cstdint>
#include <random>

namespace mss::rng {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Domain tags keeping the per-purpose streams disjoint under one root seed.
enum class StreamKind : std::uint64_t {
    Panel = 0x01,
    Bootstrap = 0x02,
    Simulation = 0x03,
};

constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
    return splitmix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

/// Derive the seed of sub-stream (kind, index, attempt) from a root seed.
/// Every replication owns its own stream, so results do not depend on how
/// replications are scheduled across threads.
constexpr std::uint64_t derive_seed(std::uint64_t root, StreamKind kind,
                                    std::uint64_t index, std::uint64_t attempt = 0) {
    std::uint64_t h = splitmix64(root);
    h = combine(h, static_cast<std::uint64_t>(kind));
    h = combine(h, index);
    h = combine(h, attempt);
    return h;
}

inline std::mt19937_64 make_stream(std::uint64_t root, StreamKind kind,
                                   std::uint64_t index, std::uint64_t attempt = 0) {
    return std::mt19937_64(derive_seed(root, kind, index, attempt));
}

}  // namespace mss::rng
