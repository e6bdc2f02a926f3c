#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

// Distributions hand-rolled over mt19937_64: the engine's output sequence is
// fixed by the standard, while std:: distributions are not, and seeded runs
// must reproduce byte-identical artifacts.
namespace memnet::rng {

using engine = std::mt19937_64;

inline double uniform01(engine& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline std::uint64_t uniform_below(engine& g, std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / n * n;
    std::uint64_t r = g();
    while (r >= limit) r = g();
    return r % n;
}

template <class T>
void shuffle(std::vector<T>& v, engine& g) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[uniform_below(g, i)]);
}

// Knuth's product-of-uniforms method; fine for the small rates used here.
inline std::int64_t poisson(engine& g, double rate) {
    if (rate <= 0.0) return 0;
    const double limit = std::exp(-rate);
    std::int64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform01(g);
    } while (p > limit);
    return k - 1;
}

// Deterministic seed derivation for independent sub-streams (splitmix64).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace memnet::rng
