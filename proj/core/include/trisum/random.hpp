#pragma once

#include <cstdint>
#include <random>

namespace trisum {

// Seeded RNG with explicit derivations so that identical seeds reproduce
// identical streams independent of standard-library distribution details.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform in [0, bound).  Plain modulo; the bias is irrelevant for
    // test-case generation and keeps the stream portable.
    std::uint64_t below(std::uint64_t bound) {
        return bound == 0 ? 0 : next() % bound;
    }

    std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double unit() {  // [0,1)
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    bool coin() { return (next() & 1) != 0; }

    // Child generator with a decorrelated seed, for per-task streams.
    Rng fork(std::uint64_t salt) {
        return Rng(next() ^ (salt * 0x9e3779b97f4a7c15ULL));
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace trisum
