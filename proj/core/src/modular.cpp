#include "trisum/modular.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace trisum {

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

Modulus factorize(std::uint64_t q) {
    if (q == 0) throw std::invalid_argument("factorize: q must be positive");
    Modulus m;
    m.q = q;
    std::uint64_t rest = q;
    for (std::uint64_t p = 2; p * p <= rest; p += (p == 2 ? 1 : 2)) {
        if (rest % p != 0) continue;
        unsigned e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        m.factorization.emplace_back(p, e);
    }
    if (rest > 1) m.factorization.emplace_back(rest, 1);
    return m;
}

std::uint64_t euler_phi(const Modulus& m) {
    std::uint64_t phi = 1;
    for (const auto& [p, e] : m.factorization) {
        std::uint64_t pe = 1;
        for (unsigned i = 0; i + 1 < e; ++i) pe *= p;
        phi *= pe * (p - 1);
    }
    return phi;
}

UnitResidues unit_residues(std::uint64_t q) {
    if (q == 0) throw std::invalid_argument("unit_residues: q must be positive");
    UnitResidues u;
    u.q = q;
    if (q == 1) {
        u.residues = {0};  // trivial group
        return u;
    }
    u.residues.reserve(q / 2);
    for (std::uint64_t r = 1; r < q; ++r) {
        if (gcd_u64(r, q) == 1) u.residues.push_back(r);
    }
    return u;
}

std::pair<std::uint64_t, std::uint64_t> crt_split(std::uint64_t q1, std::uint64_t q2,
                                                  std::uint64_t a) {
    if (q1 == 0 || q2 == 0) throw std::invalid_argument("crt_split: zero modulus");
    if (gcd_u64(q1, q2) != 1)
        throw std::invalid_argument("crt_split: moduli not coprime: " + std::to_string(q1) +
                                    ", " + std::to_string(q2));
    if (a >= q1 * q2) throw std::invalid_argument("crt_split: residue out of range");
    return {a % q1, a % q2};
}

namespace {

// x with x*a == 1 (mod m); requires gcd(a, m) == 1.
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
    while (new_r != 0) {
        const std::int64_t quot = r / new_r;
        t = std::exchange(new_t, t - quot * new_t);
        r = std::exchange(new_r, r - quot * new_r);
    }
    if (r != 1) throw std::invalid_argument("mod_inverse: not invertible");
    if (t < 0) t += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(t);
}

}  // namespace

std::uint64_t crt_combine(std::uint64_t q1, std::uint64_t q2, std::uint64_t a1,
                          std::uint64_t a2) {
    if (q1 == 0 || q2 == 0) throw std::invalid_argument("crt_combine: zero modulus");
    if (gcd_u64(q1, q2) != 1)
        throw std::invalid_argument("crt_combine: moduli not coprime: " + std::to_string(q1) +
                                    ", " + std::to_string(q2));
    a1 %= q1;
    a2 %= q2;
    // x = a1 + q1 * ((a2 - a1) * q1^{-1} mod q2); product q1*q2 assumed to
    // fit 64 bits (desk-scale moduli).
    const std::uint64_t inv = mod_inverse(q1 % q2 == 0 ? 1 : q1 % q2, q2);
    using u128 = unsigned __int128;
    const std::uint64_t diff = (a2 + q2 - a1 % q2) % q2;
    const std::uint64_t k = static_cast<std::uint64_t>((u128)diff * inv % q2);
    return a1 + q1 * k;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL,
                            31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    using u128 = unsigned __int128;
    auto mul = [n](std::uint64_t a, std::uint64_t b) {
        return static_cast<std::uint64_t>((u128)a * b % n);
    };
    auto pow_mod = [&](std::uint64_t base, std::uint64_t exp) {
        std::uint64_t acc = 1;
        base %= n;
        while (exp > 0) {
            if (exp & 1) acc = mul(acc, base);
            base = mul(base, base);
            exp >>= 1;
        }
        return acc;
    };
    // Sufficient witness set for every n < 2^64.
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL,
                            31ULL, 37ULL}) {
        std::uint64_t x = pow_mod(a, d);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < s; ++i) {
            x = mul(x, x);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

}  // namespace trisum
