#pragma once

#include "trisum/sieve.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace trisum {

// Declarative description of a subset of the primes.  Deterministic:
// the same spec materialized at the same bound always yields the same set.
struct PrimeSubsetSpec {
    enum class Kind {
        AllPrimes,
        ResidueClasses,   // p == r (mod modulus) for some allowed r
        ExcludePrimes,    // base minus an explicit prime list
        BlockUnion,       // base intersected with a union of closed intervals
        Difference,       // base minus removal
        ExplicitList,     // exactly the listed primes
        SieveFiltered,    // p in base with target - p composite for every target
    };

    Kind kind = Kind::AllPrimes;
    std::uint64_t modulus = 0;                      // ResidueClasses
    std::vector<std::uint64_t> residues;            // ResidueClasses
    std::vector<std::uint64_t> primes;              // ExcludePrimes / ExplicitList
    std::vector<std::pair<std::uint64_t, std::uint64_t>> intervals;  // BlockUnion
    std::vector<std::uint64_t> targets;             // SieveFiltered
    std::shared_ptr<PrimeSubsetSpec> base;          // for the derived variants
    std::shared_ptr<PrimeSubsetSpec> removal;       // Difference

    static PrimeSubsetSpec all_primes();
    static PrimeSubsetSpec residue_classes(std::uint64_t m, std::vector<std::uint64_t> rs);
    static PrimeSubsetSpec exclude(PrimeSubsetSpec base, std::vector<std::uint64_t> primes);
    static PrimeSubsetSpec block_union(PrimeSubsetSpec base,
                                       std::vector<std::pair<std::uint64_t, std::uint64_t>> iv);
    static PrimeSubsetSpec difference(PrimeSubsetSpec base, PrimeSubsetSpec removal);
    static PrimeSubsetSpec explicit_list(std::vector<std::uint64_t> primes);
    static PrimeSubsetSpec sieve_filtered(PrimeSubsetSpec base,
                                          std::vector<std::uint64_t> targets);
};

void to_json(nlohmann::json& j, const PrimeSubsetSpec& s);
void from_json(const nlohmann::json& j, PrimeSubsetSpec& s);

// Membership of prime p (p must be prime; membership is evaluated on the
// spec structure with `sieve` supplying compositeness tests for
// SieveFiltered).
bool spec_contains(const PrimeSubsetSpec& spec, std::uint64_t p, const PrimeSieve& sieve);

// All members <= x, sorted.
std::vector<std::uint64_t> materialize(const PrimeSubsetSpec& spec, std::uint64_t x,
                                       const PrimeSieve& sieve);

// Relative density diagnostics on a geometric grid.  liminf/limsup are not
// computable; the summary takes min/max over the tail half of the grid.
struct DensityProfile {
    std::vector<std::uint64_t> grid;
    std::vector<std::uint64_t> subset_counts;
    std::vector<std::uint64_t> prime_counts;
    std::vector<double> ratios;
    double empirical_lower = 0.0;  // min ratio over the tail half
    double empirical_upper = 0.0;  // max ratio over the tail half
};

DensityProfile relative_density_profile(const PrimeSubsetSpec& spec, std::uint64_t x_max,
                                        std::size_t grid_size, const PrimeSieve& sieve);

std::string density_profile_csv(const DensityProfile& profile);

// W-trick parameters.  Default w = max(floor(log log n / 4), 3); W is the
// product of primes <= w.  The W <= log n sanity bound applies only in the
// default regime; overrides skip it but are rejected if W > n/100.
struct WTrick {
    std::uint64_t w = 0;
    std::uint64_t W = 1;
    bool overridden = false;
};

WTrick W_of(std::uint64_t n, std::optional<std::uint64_t> w_override = std::nullopt);

// Truncated singular series: product over p <= cutoff of (1 + (p-1)^-3) for
// p not dividing n and (1 - (p-1)^-2) for p | n.  tail_bound bounds the
// multiplicative deviation |true/value - 1| of the omitted factors.
struct SingularSeries {
    double value = 0.0;
    double tail_bound = 0.0;
};

SingularSeries singular_series(std::uint64_t n, std::uint64_t prime_cutoff,
                               const PrimeSieve& sieve);

// Ordered prime-triple counts for p1+p2+p3 = n: exact r(n) and the
// log-weighted sum (compensated summation).
struct TripleCount {
    std::uint64_t r = 0;       // ordered representations
    double weighted = 0.0;     // sum of log p1 log p2 log p3 over ordered triples
};

TripleCount vinogradov_weighted_count(std::uint64_t n, const PrimeSieve& sieve);

// Independent route for r(n): integer pair-count convolution.  Intended for
// n <= ~20000 (the builder is O(pi(n)^2)).
class PairCountTable {
public:
    PairCountTable(std::uint64_t n_max, const PrimeSieve& sieve);
    std::uint64_t r(std::uint64_t n, const PrimeSieve& sieve) const;

private:
    std::uint64_t n_max_;
    std::vector<std::uint32_t> pair_counts_;  // ordered prime pairs summing to m
};

// Lexicographically smallest witness (p1,p2,p3) with p_i in spec_i and
// p1+p2+p3 = n, or nullopt after an exhaustive scan.
struct Representation {
    std::uint64_t p1 = 0, p2 = 0, p3 = 0;
};

std::optional<Representation> find_representation(std::uint64_t n, const PrimeSubsetSpec& s1,
                                                  const PrimeSubsetSpec& s2,
                                                  const PrimeSubsetSpec& s3,
                                                  const PrimeSieve& sieve);

// Batch variant for every odd n in [n_lo, n_hi]; NONE rows are certified by
// an exact sumset bitmap of S1+S2.
struct SurveyRow {
    std::uint64_t n = 0;
    std::optional<Representation> witness;
};

std::vector<SurveyRow> representation_survey(std::uint64_t n_lo, std::uint64_t n_hi,
                                             const PrimeSubsetSpec& s1,
                                             const PrimeSubsetSpec& s2,
                                             const PrimeSubsetSpec& s3, const PrimeSieve& sieve);

// Section-4 style counterexample constructions with machine-checkable
// certificates.

struct BinaryCounterexample {
    std::uint64_t w = 0;
    std::uint64_t W_odd = 1;    // product of odd primes <= w
    std::uint64_t W_full = 2;   // 2 * W_odd
    PrimeSubsetSpec p1_spec;
    PrimeSubsetSpec p2_spec;
    std::uint64_t x_max = 0;
    // Targets W_full*k + 1 (k odd) and the classical family W_odd*k + 1
    // (k odd); both verified to have zero representations p1 + p2.
    std::uint64_t targets_checked = 0;
    std::uint64_t paper_targets_checked = 0;
    std::vector<std::uint64_t> violations;        // W_full family, empty on success
    std::vector<std::uint64_t> paper_violations;  // W_odd family, empty on success
    // Density check at x_density.
    std::uint64_t x_density = 0;
    double d1 = 0.0, d2 = 0.0;
    double theoretical_gap = 0.0;  // prod (p-2)/(p-1) over odd p <= w
    bool density_ok = false;       // d1 + d2 > 2 - gap - 0.05
};

BinaryCounterexample binary_counterexample(std::uint64_t w, std::uint64_t x_max,
                                           std::uint64_t x_density, const PrimeSieve& sieve);

struct BlockInfo {
    std::uint64_t k = 0;
    std::uint64_t lo = 0, hi = 0;   // block interval
    std::uint64_t n_k = 0;          // N_{k+1} + N_k + 2
    std::uint64_t block_size = 0;   // |B_k|
    std::uint64_t a_k_size = 0;     // |{p <= n_k : n_k - p prime}| (reported only)
    bool pair_free_within_block = false;  // n_k not in B_k + B_k
    bool pair_free_full = false;          // n_k not in P + P
};

struct BlocksCounterexample {
    std::vector<std::uint64_t> schedule;  // N_1 < N_2 < ...
    PrimeSubsetSpec p_spec;               // P1 = P2 = union of blocks
    std::vector<BlockInfo> blocks;
    bool all_verified = false;
};

// Schedule must be strictly increasing; blocks exist for indices with both
// neighbors available.  Values beyond the sieve range are rejected.
BlocksCounterexample blocks_counterexample(const std::vector<std::uint64_t>& schedule,
                                           const PrimeSieve& sieve);

// The paper's growth schedule N_k = 2*floor(e^{k sqrt(log k)}), truncated
// where it would leave the sieve range.
std::vector<std::uint64_t> paper_block_schedule(std::size_t k_max, std::uint64_t value_cap);

}  // namespace trisum
