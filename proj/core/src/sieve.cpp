#include "trisum/sieve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace trisum {

PrimeSieve::PrimeSieve(std::uint64_t limit) : limit_(limit) {
    if (limit > 1'000'000'000ULL)
        throw std::invalid_argument("PrimeSieve: limit capped at 1e9");
    const std::uint64_t n_odd = limit >= 1 ? (limit + 1) / 2 : 0;  // odd numbers <= limit
    bits_.assign((n_odd + 63) / 64, ~0ULL);
    if (!bits_.empty()) bits_[0] &= ~1ULL;  // 1 is not prime
    // Mask tail bits beyond limit.
    if (n_odd % 64 != 0 && !bits_.empty()) bits_.back() &= (1ULL << (n_odd % 64)) - 1;

    // Base primes up to sqrt(limit), then strike odd composites in segments
    // sized to stay cache-resident.
    const std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
    std::vector<std::uint32_t> base;
    {
        std::vector<char> small(root + 1, 1);
        for (std::uint64_t p = 3; p * p <= root; p += 2)
            if (small[p])
                for (std::uint64_t m = p * p; m <= root; m += 2 * p) small[m] = 0;
        for (std::uint64_t p = 3; p <= root; p += 2)
            if (small[p]) base.push_back(static_cast<std::uint32_t>(p));
    }

    constexpr std::uint64_t kSegment = 1ULL << 20;  // odd numbers per segment
    for (std::uint64_t seg_lo = 0; seg_lo < n_odd; seg_lo += kSegment) {
        const std::uint64_t seg_hi = std::min(n_odd, seg_lo + kSegment);  // exclusive
        const std::uint64_t val_hi = 2 * (seg_hi - 1) + 1;
        for (std::uint32_t p : base) {
            const std::uint64_t p2 = static_cast<std::uint64_t>(p) * p;
            if (p2 > val_hi) break;
            // First odd multiple of p that is >= max(p^2, segment start).
            std::uint64_t start = std::max<std::uint64_t>(p2, 2 * seg_lo + 1);
            std::uint64_t m = ((start + p - 1) / p) * p;
            if ((m & 1) == 0) m += p;
            if (m < p2) m = p2;
            for (; m <= val_hi; m += 2 * p) {
                const std::uint64_t idx = m >> 1;
                bits_[idx >> 6] &= ~(1ULL << (idx & 63));
            }
        }
    }

    block_counts_.assign(bits_.size() / kCountBlock + 2, 0);
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < bits_.size(); ++w) {
        if (w % kCountBlock == 0) block_counts_[w / kCountBlock] = acc;
        acc += static_cast<std::uint64_t>(std::popcount(bits_[w]));
    }
    block_counts_[bits_.size() / kCountBlock + 1] = acc;
    if (bits_.size() % kCountBlock == 0) block_counts_[bits_.size() / kCountBlock] = acc;
}

std::uint64_t PrimeSieve::count_leq(std::uint64_t x) const {
    if (x < 2) return 0;
    x = std::min(x, limit_);
    if (x == 2) return 1;
    // Count odd primes <= x, plus one for 2.
    const std::uint64_t idx_max = ((x & 1) ? x : x - 1) >> 1;  // bit index of last odd <= x
    const std::uint64_t word_max = idx_max >> 6;
    std::uint64_t count = block_counts_[word_max / kCountBlock];
    for (std::uint64_t w = (word_max / kCountBlock) * kCountBlock; w < word_max; ++w)
        count += static_cast<std::uint64_t>(std::popcount(bits_[w]));
    const std::uint64_t in_word = (idx_max & 63) == 63
                                      ? bits_[word_max]
                                      : (bits_[word_max] & ((2ULL << (idx_max & 63)) - 1));
    count += static_cast<std::uint64_t>(std::popcount(in_word));
    return count + 1;
}

std::vector<std::uint32_t> PrimeSieve::primes_leq(std::uint64_t x) const {
    std::vector<std::uint32_t> out;
    x = std::min(x, limit_);
    if (x < 2) return out;
    out.reserve(count_leq(x));
    out.push_back(2);
    for (std::uint64_t n = 3; n <= x; n += 2)
        if (is_prime(n)) out.push_back(static_cast<std::uint32_t>(n));
    return out;
}

}  // namespace trisum
