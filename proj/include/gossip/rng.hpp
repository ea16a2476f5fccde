#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gossip {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent per-run seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
    return mix64(h ^ (mix64(v) + 0x632be59bd9b4e019ULL + (h << 6) + (h >> 2)));
}

inline std::uint64_t hash_string(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// seed XOR hash(n, scenario, replicate)
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t n, std::string_view scenario,
                                 std::uint64_t replicate) noexcept {
    std::uint64_t h = hash_combine(hash_combine(mix64(n), hash_string(scenario)), replicate);
    return seed ^ h;
}

inline double draw_exponential(Rng& rng, double rate) {
    return std::exponential_distribution<double>(rate)(rng);
}

inline double draw_unit(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline std::uint32_t draw_index(Rng& rng, std::uint32_t count) {
    return std::uniform_int_distribution<std::uint32_t>(0, count - 1)(rng);
}

}  // namespace gossip
