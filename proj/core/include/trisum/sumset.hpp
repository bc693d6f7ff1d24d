#pragma once

#include "trisum/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace trisum {

// Subset of Z_N (N prime) as a bitmask.
class ResidueSet {
public:
    explicit ResidueSet(std::uint64_t N);
    ResidueSet(std::uint64_t N, const std::vector<std::uint64_t>& members);

    std::uint64_t modulus() const { return N_; }
    std::uint64_t size() const { return size_; }
    bool contains(std::uint64_t x) const {
        return (words_[x >> 6] >> (x & 63)) & 1ULL;
    }
    void insert(std::uint64_t x);
    std::vector<std::uint64_t> members() const;

    static ResidueSet full(std::uint64_t N);

private:
    std::uint64_t N_;
    std::uint64_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

enum class NuMode { Auto, Enumerate, Convolve };

// nu_{X_1..X_k}(n): ordered tuples with x_1 + ... + x_k == n in Z_N.
// k = 1 is set membership.  Enumerate mode is O(N^{k-1}) and limited to
// k <= 4; convolve mode is exact integer cyclic convolution, O(k N^2).
std::uint64_t nu_count(const std::vector<ResidueSet>& sets, std::uint64_t n,
                       NuMode mode = NuMode::Auto);

// All values nu(n) for n in Z_N at once (convolution mode).
std::vector<std::uint64_t> nu_counts_all(const std::vector<ResidueSet>& sets);

// Pollard's inequality: sum_{i=1}^t |S_i(A,B)| >= min{tN, t(|A|+|B|-t)},
// where S_i = {x : nu_{A,B}(x) >= i}.  t = 1 is Cauchy-Davenport.
struct PollardReport {
    std::uint64_t N = 0;
    std::uint64_t t = 0;
    std::vector<std::uint64_t> level_set_sizes;  // |S_1| .. |S_t|
    std::uint64_t lhs = 0;
    std::uint64_t rhs = 0;
    bool holds = false;
};

PollardReport pollard_check(const ResidueSet& A, const ResidueSet& B, std::uint64_t t);

// theta = min{theta_1, ..., theta_k, (sum theta_i - 1)/(3k-5)}.  Exact;
// requires k >= 2 and sum > 1.
Rational lemma3_theta(const std::vector<Rational>& theta_list);

struct Lemma3Report {
    std::uint64_t N = 0;
    std::size_t k = 0;
    std::uint64_t n = 0;
    std::vector<Rational> theta_list;
    Rational theta;
    Rational theta_star;      // diagnostic from the proof; meaningful for k >= 3
    bool has_theta_star = false;
    Rational bound;           // theta^{2k-3} * N^{k-1}
    std::uint64_t actual = 0; // exact count
    bool hypothesis_met = false;
    std::string hypothesis_note;
    bool holds = false;       // actual >= bound
    // k = 2 only: the proof's direct bound |X1|+|X2|-N, recorded alongside.
    std::int64_t k2_direct_bound = 0;
};

// Verifies the Varnavides-type sumset bound.  theta_i defaults to the exact
// density |X_i|/N when theta_list is empty.  The report is computed even
// when a hypothesis fails (hypothesis_met records the status).
Lemma3Report lemma3_verify(const std::vector<ResidueSet>& sets, std::uint64_t n,
                           std::vector<Rational> theta_list = {});

// Hard cap on k for nu/lemma3 machinery.
inline constexpr std::size_t kMaxSumsetArity = 6;

}  // namespace trisum
