#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace trisum {

// q together with its prime factorization (primes strictly increasing).
// q = 1 has the empty factorization.
struct Modulus {
    std::uint64_t q = 1;
    std::vector<std::pair<std::uint64_t, unsigned>> factorization;
};

// Z_q^* as a sorted residue list.  For q = 1 the group is trivial and the
// unique residue is 0; for q > 1 residues lie in [1, q-1].
struct UnitResidues {
    std::uint64_t q = 1;
    std::vector<std::uint64_t> residues;
};

// Trial division; exact for any 64-bit q, intended range q <= 10^12.
// Rejects q = 0.
Modulus factorize(std::uint64_t q);

std::uint64_t euler_phi(const Modulus& m);

UnitResidues unit_residues(std::uint64_t q);

// CRT split/combine for coprime moduli.  Both reject gcd(q1,q2) != 1.
std::pair<std::uint64_t, std::uint64_t> crt_split(std::uint64_t q1, std::uint64_t q2,
                                                  std::uint64_t a);
std::uint64_t crt_combine(std::uint64_t q1, std::uint64_t q2, std::uint64_t a1,
                          std::uint64_t a2);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

}  // namespace trisum
