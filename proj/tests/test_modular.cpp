#include "trisum/modular.hpp"

#include "doctest.h"

#include <numeric>
#include <stdexcept>

using namespace trisum;

namespace {

// Independent factorization oracle: repeated smallest-divisor extraction.
std::vector<std::pair<std::uint64_t, unsigned>> factor_oracle(std::uint64_t q) {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t d = 2; q > 1; ++d) {
        if (d * d > q) {
            out.emplace_back(q, 1);
            break;
        }
        unsigned e = 0;
        while (q % d == 0) {
            q /= d;
            ++e;
        }
        if (e > 0) out.emplace_back(d, e);
    }
    return out;
}

}  // namespace

TEST_CASE("factorize small cases") {
    CHECK(factorize(1).factorization.empty());
    CHECK(factorize(12).factorization ==
          std::vector<std::pair<std::uint64_t, unsigned>>{{2, 2}, {3, 1}});
    CHECK(factorize(1078).factorization == factor_oracle(1078));
    CHECK(factorize(1078).factorization ==
          std::vector<std::pair<std::uint64_t, unsigned>>{{2, 1}, {7, 2}, {11, 1}});
    CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("factorize reconstructs q and matches oracle") {
    for (std::uint64_t q = 1; q <= 5000; ++q) {
        const Modulus m = factorize(q);
        std::uint64_t prod = 1;
        std::uint64_t prev_prime = 0;
        for (const auto& [p, e] : m.factorization) {
            CHECK(p > prev_prime);
            CHECK(e >= 1);
            prev_prime = p;
            for (unsigned i = 0; i < e; ++i) prod *= p;
        }
        CHECK(prod == q);
        CHECK(m.factorization == factor_oracle(q));
    }
}

TEST_CASE("euler_phi values") {
    CHECK(euler_phi(factorize(1)) == 1);
    CHECK(euler_phi(factorize(7)) == 6);
    CHECK(euler_phi(factorize(15)) == 8);
}

TEST_CASE("unit_residues basics") {
    CHECK(unit_residues(3).residues == std::vector<std::uint64_t>{1, 2});
    CHECK(unit_residues(5).residues == std::vector<std::uint64_t>{1, 2, 3, 4});
    const auto u35 = unit_residues(35);
    CHECK(u35.residues.size() == 24);
    CHECK(u35.residues[0] == 1);
    CHECK(u35.residues[1] == 2);
    CHECK(u35.residues[2] == 3);
    CHECK(u35.residues.back() == 34);
    // q = 1: the trivial group.
    CHECK(unit_residues(1).residues == std::vector<std::uint64_t>{0});
}

TEST_CASE("unit residue count equals phi up to 10^4") {
    for (std::uint64_t q = 1; q <= 10'000; ++q) {
        CHECK(unit_residues(q).residues.size() == euler_phi(factorize(q)));
    }
}

TEST_CASE("crt split/combine examples") {
    CHECK(crt_split(3, 5, 7) == std::pair<std::uint64_t, std::uint64_t>{1, 2});
    CHECK(crt_split(3, 5, 0) == std::pair<std::uint64_t, std::uint64_t>{0, 0});
    CHECK(crt_split(7, 11, 38) == std::pair<std::uint64_t, std::uint64_t>{3, 5});
    CHECK(crt_combine(3, 5, 1, 2) == 7);
    CHECK(crt_combine(3, 5, 0, 0) == 0);
    CHECK(crt_combine(7, 11, 3, 5) == 38);
    CHECK_THROWS_AS(crt_split(6, 8, 5), std::invalid_argument);
    CHECK_THROWS_AS(crt_combine(6, 8, 1, 1), std::invalid_argument);
}

TEST_CASE("crt_combine found by exhaustive scan at (7,11)") {
    for (std::uint64_t a1 = 0; a1 < 7; ++a1) {
        for (std::uint64_t a2 = 0; a2 < 11; ++a2) {
            std::uint64_t expected = 77;
            for (std::uint64_t x = 0; x < 77; ++x) {
                if (x % 7 == a1 && x % 11 == a2) {
                    expected = x;
                    break;
                }
            }
            CHECK(crt_combine(7, 11, a1, a2) == expected);
        }
    }
}

TEST_CASE("crt round trip over all coprime pairs up to 100") {
    for (std::uint64_t q1 = 1; q1 <= 100; ++q1) {
        for (std::uint64_t q2 = q1; q2 <= 100; ++q2) {
            if (std::gcd(q1, q2) != 1) continue;
            for (std::uint64_t a = 0; a < q1 * q2; ++a) {
                const auto [a1, a2] = crt_split(q1, q2, a);
                REQUIRE(crt_combine(q1, q2, a1, a2) == a);
            }
        }
    }
}

TEST_CASE("unit residues factor through CRT") {
    const std::uint64_t q1 = 9, q2 = 14;
    const auto units = unit_residues(q1 * q2);
    for (std::uint64_t x = 0; x < q1 * q2; ++x) {
        const bool unit = std::binary_search(units.residues.begin(), units.residues.end(), x);
        const bool parts_unit = std::gcd(x % q1, q1) == 1 && std::gcd(x % q2, q2) == 1;
        CHECK(unit == parts_unit);
    }
}

TEST_CASE("is_prime_u64 sanity") {
    CHECK_FALSE(is_prime_u64(0));
    CHECK_FALSE(is_prime_u64(1));
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(3359));
    CHECK_FALSE(is_prime_u64(16669));  // 79 * 211
    int count = 0;
    for (std::uint64_t n = 2; n <= 10'000; ++n)
        if (is_prime_u64(n)) ++count;
    CHECK(count == 1229);
}
