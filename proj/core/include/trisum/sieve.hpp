#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace trisum {

// Segmented sieve of Eratosthenes, odd-only bit storage.  Intended range
// limit <= 10^9 (about 62 MB of bits at the top end).
class PrimeSieve {
public:
    explicit PrimeSieve(std::uint64_t limit);

    std::uint64_t limit() const { return limit_; }

    bool is_prime(std::uint64_t n) const {
        if (n < 2 || n > limit_) return false;
        if (n == 2) return true;
        if ((n & 1) == 0) return false;
        const std::uint64_t idx = n >> 1;
        return (bits_[idx >> 6] >> (idx & 63)) & 1ULL;
    }

    // pi(x) for x <= limit.
    std::uint64_t count_leq(std::uint64_t x) const;

    std::vector<std::uint32_t> primes_leq(std::uint64_t x) const;

    template <typename Fn>
    void for_each_prime(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
        if (lo <= 2 && hi >= 2) fn(2);
        std::uint64_t start = std::max<std::uint64_t>(lo, 3) | 1ULL;
        for (std::uint64_t n = start; n <= hi; n += 2)
            if (is_prime(n)) fn(n);
    }

private:
    std::uint64_t limit_;
    std::vector<std::uint64_t> bits_;        // bit i <=> 2i+1 prime
    std::vector<std::uint64_t> block_counts_;  // cumulative primes per 64-word block
    static constexpr std::uint64_t kCountBlock = 64;  // words per count block
};

}  // namespace trisum
