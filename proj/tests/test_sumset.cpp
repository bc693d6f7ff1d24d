#include "trisum/sumset.hpp"

#include "trisum/errors.hpp"
#include "trisum/modular.hpp"
#include "trisum/random.hpp"

#include "doctest.h"

#include <numeric>
#include <stdexcept>

using namespace trisum;

namespace {

ResidueSet random_subset(std::uint64_t N, std::uint64_t size, Rng& rng) {
    std::vector<std::uint64_t> idx(N);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::uint64_t i = 0; i < size; ++i) {
        const std::uint64_t j = i + rng.below(N - i);
        std::swap(idx[i], idx[j]);
    }
    ResidueSet s(N);
    for (std::uint64_t i = 0; i < size; ++i) s.insert(idx[i]);
    return s;
}

ResidueSet from_bits(std::uint64_t N, std::uint64_t bits) {
    ResidueSet s(N);
    for (std::uint64_t x = 0; x < N; ++x)
        if ((bits >> x) & 1) s.insert(x);
    return s;
}

}  // namespace

TEST_CASE("ResidueSet requires a prime modulus") {
    CHECK_THROWS_AS(ResidueSet(10), std::invalid_argument);
    ResidueSet s(7, {1, 2, 4});
    CHECK(s.size() == 3);
    CHECK(s.contains(4));
    CHECK_FALSE(s.contains(3));
}

TEST_CASE("nu_count examples") {
    ResidueSet X(5, {1, 2, 3});
    CHECK(nu_count({X, X}, 0) == 2);  // (2,3) and (3,2)

    ResidueSet full7 = ResidueSet::full(7);
    for (std::uint64_t n = 0; n < 7; ++n) {
        CHECK(nu_count({full7}, n) == 1);
        CHECK(nu_count({full7, full7, full7}, n) == 49);
    }

    ResidueSet a(5, {0, 1});
    ResidueSet b(7, {0, 1});
    CHECK_THROWS_AS(nu_count({a, b}, 0), std::invalid_argument);
}

TEST_CASE("nu_count: convolution and enumeration agree") {
    Rng rng(42);
    for (std::uint64_t N : {5ULL, 31ULL, 101ULL}) {
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t k = 2 + trial % 2;
            std::vector<ResidueSet> sets;
            for (std::size_t i = 0; i < k; ++i)
                sets.push_back(random_subset(N, 1 + rng.below(N - 1), rng));
            for (std::uint64_t n = 0; n < N; ++n) {
                CHECK(nu_count(sets, n, NuMode::Enumerate) ==
                      nu_count(sets, n, NuMode::Convolve));
            }
        }
    }
}

TEST_CASE("nu total mass equals the product of sizes") {
    Rng rng(43);
    for (std::uint64_t N : {5ULL, 31ULL, 61ULL}) {
        for (std::size_t k : {std::size_t{2}, std::size_t{3}}) {
            std::vector<ResidueSet> sets;
            std::uint64_t prod = 1;
            for (std::size_t i = 0; i < k; ++i) {
                sets.push_back(random_subset(N, 1 + rng.below(N - 1), rng));
                prod *= sets.back().size();
            }
            const auto all = nu_counts_all(sets);
            std::uint64_t total = 0;
            for (std::uint64_t v : all) total += v;
            CHECK(total == prod);
        }
    }
}

TEST_CASE("pollard example at N=7") {
    ResidueSet A(7, {1, 2, 4});
    const PollardReport rep = pollard_check(A, A, 2);
    CHECK(rep.level_set_sizes == std::vector<std::uint64_t>{6, 3});
    CHECK(rep.lhs == 9);
    CHECK(rep.rhs == 8);
    CHECK(rep.holds);
}

TEST_CASE("pollard t=1 is Cauchy-Davenport") {
    Rng rng(44);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint64_t N = 31;
        ResidueSet A = random_subset(N, 1 + rng.below(N), rng);
        ResidueSet B = random_subset(N, 1 + rng.below(N), rng);
        const PollardReport rep = pollard_check(A, B, 1);
        // |A+B| computed independently.
        std::vector<char> hit(N, 0);
        for (std::uint64_t a = 0; a < N; ++a)
            if (A.contains(a))
                for (std::uint64_t b = 0; b < N; ++b)
                    if (B.contains(b)) hit[(a + b) % N] = 1;
        std::uint64_t sumset = 0;
        for (char h : hit) sumset += static_cast<std::uint64_t>(h);
        CHECK(rep.lhs == sumset);
        CHECK(sumset >= std::min<std::uint64_t>(N, A.size() + B.size() - 1));
        CHECK(rep.holds);
    }
}

TEST_CASE("pollard full group") {
    ResidueSet full = ResidueSet::full(11);
    const PollardReport rep = pollard_check(full, full, 1);
    CHECK(rep.level_set_sizes == std::vector<std::uint64_t>{11});
    CHECK(rep.rhs == 11);
    CHECK(rep.holds);
}

TEST_CASE("pollard exhaustive over all nonempty subsets of Z_5 and Z_7") {
    for (std::uint64_t N : {5ULL, 7ULL}) {
        for (std::uint64_t abits = 1; abits < (1ULL << N); ++abits) {
            const ResidueSet A = from_bits(N, abits);
            for (std::uint64_t bbits = 1; bbits < (1ULL << N); ++bbits) {
                const ResidueSet B = from_bits(N, bbits);
                const std::uint64_t t_max = std::min(A.size(), B.size());
                for (std::uint64_t t = 1; t <= t_max; ++t) {
                    REQUIRE(pollard_check(A, B, t).holds);
                }
            }
        }
    }
}

TEST_CASE("pollard randomized across odd prime moduli") {
    Rng rng(45);
    for (std::uint64_t N : {13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL}) {
        for (int trial = 0; trial < 300; ++trial) {
            ResidueSet A = random_subset(N, 1 + rng.below(N), rng);
            ResidueSet B = random_subset(N, 1 + rng.below(N), rng);
            const std::uint64_t t = 1 + rng.below(std::min(A.size(), B.size()));
            REQUIRE(pollard_check(A, B, t).holds);
        }
    }
}

TEST_CASE("pollard rejects out-of-range t") {
    ResidueSet A(7, {1, 2});
    CHECK_THROWS_AS(pollard_check(A, A, 0), std::invalid_argument);
    CHECK_THROWS_AS(pollard_check(A, A, 3), std::invalid_argument);
}

TEST_CASE("lemma3_theta formula") {
    CHECK(lemma3_theta({Rational(2, 5), Rational(2, 5), Rational(2, 5)}) == Rational(1, 20));
    CHECK(lemma3_theta({Rational(3, 5), Rational(3, 5)}) == Rational(1, 5));
    CHECK(lemma3_theta({Rational(9, 10), Rational(9, 10), Rational(9, 10), Rational(9, 10)}) ==
          Rational(26, 70));
    CHECK_THROWS_AS(lemma3_theta({Rational(1, 2), Rational(1, 2)}), hypothesis_error);
    CHECK_THROWS_AS(lemma3_theta({Rational(1, 2)}), std::invalid_argument);
}

TEST_CASE("lemma3 k=2 reduces to the direct bound") {
    Rng rng(46);
    const std::uint64_t N = 53;
    for (int trial = 0; trial < 100; ++trial) {
        ResidueSet A = random_subset(N, 32 + rng.below(20), rng);
        ResidueSet B = random_subset(N, 32 + rng.below(20), rng);
        const Lemma3Report rep = lemma3_verify({A, B}, rng.below(N));
        CHECK(rep.k2_direct_bound ==
              static_cast<std::int64_t>(A.size() + B.size()) - static_cast<std::int64_t>(N));
        if (rep.hypothesis_met) {
            CHECK(rep.holds);
            CHECK(rep.actual == nu_count({A, B}, rep.n, NuMode::Enumerate));
            if (rep.k2_direct_bound > 0)
                CHECK(rep.actual >= static_cast<std::uint64_t>(rep.k2_direct_bound));
        }
    }
}

TEST_CASE("lemma3 full sets") {
    const std::uint64_t N = 31;
    ResidueSet full = ResidueSet::full(N);
    const Lemma3Report rep = lemma3_verify({full, full, full}, 5);
    CHECK(rep.hypothesis_met);
    CHECK(rep.actual == N * N);
    CHECK(rep.holds);
}

TEST_CASE("lemma3 at N=61 with half densities: hypothesis unmet, still reported") {
    Rng rng(47);
    ResidueSet X1 = random_subset(61, 31, rng);
    ResidueSet X2 = random_subset(61, 31, rng);
    ResidueSet X3 = random_subset(61, 31, rng);
    const Lemma3Report rep =
        lemma3_verify({X1, X2, X3}, 9, {Rational(1, 2), Rational(1, 2), Rational(1, 2)});
    CHECK(rep.theta == Rational(1, 8));
    CHECK_FALSE(rep.hypothesis_met);  // N = 61 <= 2 * 8^2
    CHECK(rep.bound == Rational(3721, 512));
    CHECK(rep.actual >= 8);  // the bound holds numerically on this instance
}

TEST_CASE("lemma3 randomized instances meeting the hypotheses") {
    Rng rng(48);
    const std::vector<std::uint64_t> primes_hi = {79, 83, 89, 97, 101};
    int verified = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t k = 2 + trial % 3;
        std::uint64_t N;
        std::vector<ResidueSet> sets;
        if (k == 2) {
            N = 53;
            for (std::size_t i = 0; i < k; ++i)
                sets.push_back(random_subset(N, 34 + rng.below(18), rng));
        } else if (k == 3) {
            N = primes_hi[rng.below(primes_hi.size())];
            for (std::size_t i = 0; i < k; ++i)
                sets.push_back(random_subset(N, (N * 11) / 20 + rng.below(N / 4), rng));
        } else {
            N = 31;
            for (std::size_t i = 0; i < k; ++i)
                sets.push_back(random_subset(N, (N * 17) / 20 + rng.below(N / 8 + 1), rng));
        }
        const std::uint64_t n = rng.below(N);
        const Lemma3Report rep = lemma3_verify(sets, n);
        if (!rep.hypothesis_met) continue;
        ++verified;
        REQUIRE(rep.holds);
        // Exact count cross-check against the independent enumeration route.
        if (k <= 3 && verified % 10 == 0)
            CHECK(rep.actual == nu_count(sets, n, NuMode::Enumerate));
    }
    CHECK(verified > 200);
}
