#pragma once

#include <cstdint>
#include <random>

namespace abc {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Independent stream keyed by (seed, a, b); the same key always gives the same sequence.
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t a = 0, uint64_t b = 0)
        : eng_(splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0x9e3779b97f4a7c15ull))) {}
    uint64_t next() { return eng_(); }
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
    // Uniform integer in [0, n) by rejection, independent of the standard library's distributions.
    uint64_t below(uint64_t n) {
        uint64_t lim = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do v = eng_();
        while (v >= lim);
        return v % n;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace abc
