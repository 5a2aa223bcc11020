#pragma once

#include <cstdint>

namespace sunco {

// splitmix64; fixed algorithm so seeded runs are reproducible everywhere,
// independent of the standard library's distributions.
struct Rng {
    uint64_t state;

    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, n) by rejection
    uint64_t below(uint64_t n) {
        if (n == 0) return 0;
        uint64_t lim = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do { v = next(); } while (v >= lim);
        return v % n;
    }

    int irange(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    bool coin() { return (next() & 1u) != 0; }
};

}  // namespace sunco
