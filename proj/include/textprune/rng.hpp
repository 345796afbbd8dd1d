#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace textprune::rng {

// All randomness in the toolkit flows through std::mt19937_64 (sequence
// fixed by the C++ standard) plus the helpers below, so selections are
// reproducible bit-for-bit across platforms and standard libraries.
using Generator = std::mt19937_64;

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Sub-stream derivation: one run seed, one named stream per stage.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage) {
    return splitmix64(seed ^ fnv1a64(stage));
}

// Unbiased uniform draw from [0, n) by rejection; avoids the
// implementation-defined behaviour of std::uniform_int_distribution.
inline std::uint64_t uniform_below(Generator& g, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
        const std::uint64_t x = g();
        if (x < limit) return x % n;
    }
}

// Uniform sample of m elements without replacement via partial
// Fisher-Yates over a copy of the pool; draws exactly m indices from g.
// The result is sorted ascending.
template <typename T>
std::vector<T> sample_without_replacement(Generator& g, std::span<const T> pool, std::size_t m) {
    std::vector<T> work(pool.begin(), pool.end());
    if (m > work.size()) m = work.size();
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + uniform_below(g, work.size() - i);
        std::swap(work[i], work[j]);
    }
    work.resize(m);
    std::sort(work.begin(), work.end());
    return work;
}

}  // namespace textprune::rng
