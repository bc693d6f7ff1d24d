#include "trisum/addition.hpp"

#include "trisum/errors.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace trisum {

UnitFunction::UnitFunction(std::uint64_t q, std::vector<Rational> values_in_residue_order)
    : domain_(unit_residues(q)), values_(std::move(values_in_residue_order)) {
    if (values_.size() != domain_.residues.size())
        throw std::invalid_argument("UnitFunction: need exactly phi(q) values, got " +
                                    std::to_string(values_.size()));
}

UnitFunction UnitFunction::zero(std::uint64_t q) {
    const auto dom = unit_residues(q);
    return UnitFunction(q, std::vector<Rational>(dom.residues.size(), Rational(0)));
}

UnitFunction UnitFunction::constant(std::uint64_t q, const Rational& c) {
    const auto dom = unit_residues(q);
    return UnitFunction(q, std::vector<Rational>(dom.residues.size(), c));
}

bool UnitFunction::is_unit(std::uint64_t a) const {
    return std::binary_search(domain_.residues.begin(), domain_.residues.end(), a % domain_.q);
}

Rational UnitFunction::operator()(std::uint64_t a) const {
    a %= domain_.q;
    const auto it = std::lower_bound(domain_.residues.begin(), domain_.residues.end(), a);
    if (it == domain_.residues.end() || *it != a) return Rational(0);  // f(non-unit) = 0
    return values_[static_cast<std::size_t>(it - domain_.residues.begin())];
}

Rational UnitFunction::total() const {
    Rational s(0);
    for (const auto& v : values_) s += v;
    return s;
}

Rational mean_K(const UnitFunction& f1, const UnitFunction& f2, const UnitFunction& f3) {
    if (f1.q() != f2.q() || f1.q() != f3.q())
        throw std::invalid_argument("mean_K: mismatched moduli");
    Rational s = f1.total() + f2.total() + f3.total();
    return s / Rational(f1.phi());
}

namespace {

struct BestTracker {
    bool have = false;
    std::uint64_t x = 0, y = 0, z = 0;
    Rational sum;

    // Scan order is lexicographic in (x, y); z is forced, so keeping the
    // first strict maximum yields the lexicographically smallest winner.
    void offer(std::uint64_t cx, std::uint64_t cy, std::uint64_t cz, Rational csum) {
        if (!have || csum > sum) {
            have = true;
            x = cx;
            y = cy;
            z = cz;
            sum = std::move(csum);
        }
    }
};

UnitTriple checked_triple(std::uint64_t q, const BestTracker& best, const Rational& K,
                          const char* who) {
    if (!best.have)
        throw internal_check_error(std::string(who) + ": no admissible triple found");
    if (best.sum < K)
        throw internal_check_error(std::string(who) +
                                   ": best triple falls below the guaranteed mean " +
                                   rational_to_string(K) + " at q=" + std::to_string(q));
    return UnitTriple{q, best.x, best.y, best.z, best.sum};
}

}  // namespace

UnitTriple solve_prime(std::uint64_t p, const UnitFunction& f1, const UnitFunction& f2,
                       const UnitFunction& f3, std::uint64_t n) {
    if (!is_prime_u64(p) || p < 5)
        throw std::invalid_argument("solve_prime: p must be a prime >= 5");
    if (f1.q() != p || f2.q() != p || f3.q() != p)
        throw std::invalid_argument("solve_prime: function moduli mismatch");
    n %= p;
    const Rational K = mean_K(f1, f2, f3);

    BestTracker best;
    for (std::size_t i = 0; i < p - 1; ++i) {
        const std::uint64_t x = i + 1;
        const Rational& v1 = f1.value_at_index(i);
        for (std::size_t j = 0; j < p - 1; ++j) {
            const std::uint64_t y = j + 1;
            const std::uint64_t z = (n + 2 * p - x - y) % p;
            if (z == 0) continue;
            best.offer(x, y, z, v1 + f2.value_at_index(j) + f3.value_at_index(z - 1));
        }
    }
    return checked_triple(p, best, K, "solve_prime");
}

namespace {

// Averaged projection onto Z_{q1}^*:  g_i(a) = (1/phi(q2)) sum_b f_i((a,b)).
UnitFunction project_average(const UnitFunction& f, std::uint64_t q1, std::uint64_t q2,
                             const UnitResidues& units_q1, const UnitResidues& units_q2) {
    std::vector<Rational> vals;
    vals.reserve(units_q1.residues.size());
    const Rational inv_phi2(1, units_q2.residues.size());
    for (std::uint64_t a : units_q1.residues) {
        Rational s(0);
        for (std::uint64_t b : units_q2.residues) s += f(crt_combine(q1, q2, a, b));
        vals.push_back(s * inv_phi2);
    }
    return UnitFunction(q1, std::move(vals));
}

// Slice along a fixed first coordinate:  h(b) = f((a0, b)) on Z_{q2}^*.
UnitFunction project_slice(const UnitFunction& f, std::uint64_t q1, std::uint64_t q2,
                           std::uint64_t a0, const UnitResidues& units_q2) {
    std::vector<Rational> vals;
    vals.reserve(units_q2.residues.size());
    for (std::uint64_t b : units_q2.residues) vals.push_back(f(crt_combine(q1, q2, a0, b)));
    return UnitFunction(q2, std::move(vals));
}

UnitTriple solve_prime_power(std::uint64_t p, unsigned alpha, std::uint64_t q,
                             const UnitFunction& f1, const UnitFunction& f2,
                             const UnitFunction& f3, std::uint64_t n, const Rational& K);

UnitTriple solve_impl(std::uint64_t q, const UnitFunction& f1, const UnitFunction& f2,
                      const UnitFunction& f3, std::uint64_t n) {
    n %= q;
    if (q == 1) {
        Rational s = f1(0) + f2(0) + f3(0);
        return UnitTriple{1, 0, 0, 0, std::move(s)};
    }
    const Modulus m = factorize(q);
    const Rational K = mean_K(f1, f2, f3);

    if (m.factorization.size() == 1) {
        const auto [p, alpha] = m.factorization.front();
        if (alpha == 1) return solve_prime(p, f1, f2, f3, n);
        return solve_prime_power(p, alpha, q, f1, f2, f3, n, K);
    }

    // Composite with >= 2 distinct primes: peel off the largest prime power.
    const auto [p, e] = m.factorization.back();
    std::uint64_t q1 = 1;
    for (unsigned i = 0; i < e; ++i) q1 *= p;
    const std::uint64_t q2 = q / q1;

    const UnitResidues units_q1 = unit_residues(q1);
    const UnitResidues units_q2 = unit_residues(q2);

    const UnitFunction g1 = project_average(f1, q1, q2, units_q1, units_q2);
    const UnitFunction g2 = project_average(f2, q1, q2, units_q1, units_q2);
    const UnitFunction g3 = project_average(f3, q1, q2, units_q1, units_q2);
    const UnitTriple t1 = solve_impl(q1, g1, g2, g3, n % q1);

    const UnitFunction h1 = project_slice(f1, q1, q2, t1.x, units_q2);
    const UnitFunction h2 = project_slice(f2, q1, q2, t1.y, units_q2);
    const UnitFunction h3 = project_slice(f3, q1, q2, t1.z, units_q2);
    const UnitTriple t2 = solve_impl(q2, h1, h2, h3, n % q2);

    const std::uint64_t x = crt_combine(q1, q2, t1.x, t2.x);
    const std::uint64_t y = crt_combine(q1, q2, t1.y, t2.y);
    const std::uint64_t z = crt_combine(q1, q2, t1.z, t2.z);
    Rational sum = f1(x) + f2(y) + f3(z);
    BestTracker best;
    best.offer(x, y, z, std::move(sum));
    return checked_triple(q, best, K, "solve_theorem2");
}

UnitTriple solve_prime_power(std::uint64_t p, unsigned alpha, std::uint64_t q,
                             const UnitFunction& f1, const UnitFunction& f2,
                             const UnitFunction& f3, std::uint64_t n, const Rational& K) {
    // Averaged functions over Z_p^*:  g_i(x) = p^{1-alpha} sum_{a == x (p)} f_i(a).
    const std::uint64_t q_low = q / p;  // p^{alpha-1}
    std::vector<Rational> g1v(p - 1, Rational(0)), g2v(p - 1, Rational(0)),
        g3v(p - 1, Rational(0));
    const auto& residues = unit_residues(q).residues;
    for (std::size_t i = 0; i < residues.size(); ++i) {
        const std::size_t slot = residues[i] % p - 1;
        g1v[slot] += f1.value_at_index(i);
        g2v[slot] += f2.value_at_index(i);
        g3v[slot] += f3.value_at_index(i);
    }
    const Rational scale(1, q_low);
    for (auto* v : {&g1v, &g2v, &g3v})
        for (auto& x : *v) x *= scale;

    const UnitTriple base = solve_prime(p, UnitFunction(p, std::move(g1v)),
                                        UnitFunction(p, std::move(g2v)),
                                        UnitFunction(p, std::move(g3v)), n % p);

    // Lift: n' = (n - x1 - y1 - z1)/p, then exhaustively maximize over
    // x2, y2 in Z_{p^{alpha-1}} with z2 forced.  The averaging identity in
    // the proof guarantees the maximum is >= K.
    const std::uint64_t s1 = base.x + base.y + base.z;  // < 3p <= q
    const std::uint64_t m_val = (n + 3 * q - s1) % q;
    const std::uint64_t n_low = m_val / p;  // m_val is divisible by p

    BestTracker best;
    for (std::uint64_t x2 = 0; x2 < q_low; ++x2) {
        const Rational v1 = f1(base.x + x2 * p);
        for (std::uint64_t y2 = 0; y2 < q_low; ++y2) {
            const std::uint64_t z2 = (n_low + 2 * q_low - x2 - y2) % q_low;
            best.offer(base.x + x2 * p, base.y + y2 * p, base.z + z2 * p,
                       v1 + f2(base.y + y2 * p) + f3(base.z + z2 * p));
        }
    }
    return checked_triple(q, best, K, "solve_theorem2(prime power)");
}

}  // namespace

UnitTriple solve_theorem2(std::uint64_t q, const UnitFunction& f1, const UnitFunction& f2,
                          const UnitFunction& f3, std::uint64_t n) {
    if (q == 0) throw std::invalid_argument("solve_theorem2: q must be positive");
    if (gcd_u64(q, 6) != 1)
        throw std::invalid_argument(
            "solve_theorem2: gcd(q,6) must be 1 (use solve_corollary1 when 2 or 3 divides q)");
    if (f1.q() != q || f2.q() != q || f3.q() != q)
        throw std::invalid_argument("solve_theorem2: function moduli mismatch");
    return solve_impl(q, f1, f2, f3, n % q);
}

namespace {

void require_values_01(const UnitFunction& f, const char* name) {
    for (std::size_t i = 0; i < f.phi(); ++i) {
        const Rational& v = f.value_at_index(i);
        if (v < 0 || v > 1)
            throw std::invalid_argument(std::string("solve_corollary1: ") + name +
                                        " takes a value outside [0,1]");
    }
}

// Direct search over Z_3^* triples with nonzero product; h1,h2,h3 are the
// values at residues 1 and 2.
struct Mod3Pick {
    std::uint64_t x = 0, y = 0, z = 0;
    Rational sum;
};

Mod3Pick best_mod3_triple(const Rational h1[2], const Rational h2[2], const Rational h3[2],
                          std::uint64_t n2) {
    BestTracker best;
    for (std::uint64_t x = 1; x <= 2; ++x) {
        if (h1[x - 1] == 0) continue;
        for (std::uint64_t y = 1; y <= 2; ++y) {
            if (h2[y - 1] == 0) continue;
            const std::uint64_t z = (n2 + 6 - x - y) % 3;
            if (z == 0 || h3[z - 1] == 0) continue;
            best.offer(x, y, z, h1[x - 1] + h2[y - 1] + h3[z - 1]);
        }
    }
    if (!best.have)
        throw internal_check_error(
            "solve_corollary1: no nonzero-product triple mod 3 despite the mass hypothesis");
    if (3 * best.sum <= 5)
        throw internal_check_error("solve_corollary1: mod-3 triple sum " +
                                   rational_to_string(best.sum) + " is not > 5/3");
    return Mod3Pick{best.x, best.y, best.z, best.sum};
}

UnitTriple corollary_odd(std::uint64_t q, const UnitFunction& f1, const UnitFunction& f2,
                         const UnitFunction& f3, std::uint64_t n);

}  // namespace

UnitTriple solve_corollary1(std::uint64_t q, const UnitFunction& f1, const UnitFunction& f2,
                            const UnitFunction& f3, std::uint64_t n) {
    if (q == 0) throw std::invalid_argument("solve_corollary1: q must be positive");
    if (f1.q() != q || f2.q() != q || f3.q() != q)
        throw std::invalid_argument("solve_corollary1: function moduli mismatch");
    const Modulus m = factorize(q);
    for (const auto& [p, e] : m.factorization) {
        if (e > 1)
            throw std::invalid_argument(
                "solve_corollary1: q must be squarefree odd or 2*(squarefree odd), got " +
                std::to_string(p) + "^" + std::to_string(e));
    }
    require_values_01(f1, "f1");
    require_values_01(f2, "f2");
    require_values_01(f3, "f3");

    const Rational mass = f1.total() + f2.total() + f3.total();
    const Rational needed = Rational(2) * Rational(f1.phi());
    if (mass <= needed)
        throw hypothesis_error("solve_corollary1: sum of values " + rational_to_string(mass) +
                               " is not > 2*phi(q) = " + rational_to_string(needed));
    n %= q;

    if (q % 2 == 0) {
        // Z_2^* = {1}: the mod-2 coordinates of x, y, z are all forced to 1,
        // so only n == 1 (mod 2) is reachable.
        if (n % 2 != 1)
            throw hypothesis_error(
                "solve_corollary1: even q forces x+y+z == 1 (mod 2); n is even");
        const std::uint64_t q_odd = q / 2;
        if (q_odd == 1) {
            Rational s = f1(1) + f2(1) + f3(1);
            return UnitTriple{q, 1, 1, 1, std::move(s)};
        }
        const UnitResidues units_odd = unit_residues(q_odd);
        auto restrict_odd = [&](const UnitFunction& f) {
            std::vector<Rational> vals;
            vals.reserve(units_odd.residues.size());
            for (std::uint64_t b : units_odd.residues)
                vals.push_back(f(crt_combine(2, q_odd, 1, b)));
            return UnitFunction(q_odd, std::move(vals));
        };
        const UnitTriple t =
            corollary_odd(q_odd, restrict_odd(f1), restrict_odd(f2), restrict_odd(f3), n % q_odd);
        const std::uint64_t x = crt_combine(2, q_odd, 1, t.x);
        const std::uint64_t y = crt_combine(2, q_odd, 1, t.y);
        const std::uint64_t z = crt_combine(2, q_odd, 1, t.z);
        return UnitTriple{q, x, y, z, t.achieved_sum};
    }
    return corollary_odd(q, f1, f2, f3, n);
}

namespace {

UnitTriple corollary_odd(std::uint64_t q, const UnitFunction& f1, const UnitFunction& f2,
                         const UnitFunction& f3, std::uint64_t n) {
    if (q == 1) {
        // Trivial group; the mass hypothesis already forces every value > 0.
        Rational s = f1(0) + f2(0) + f3(0);
        return UnitTriple{1, 0, 0, 0, std::move(s)};
    }
    if (q % 3 != 0) {
        // gcd(q,6) = 1: Theorem 2 applies directly; its mean exceeds 2, and
        // values in [0,1] then force every factor positive.
        UnitTriple t = solve_theorem2(q, f1, f2, f3, n);
        if (3 * t.achieved_sum <= 5)
            throw internal_check_error("solve_corollary1: triple sum is not > 5/3");
        if (f1(t.x) == 0 || f2(t.y) == 0 || f3(t.z) == 0)
            throw internal_check_error("solve_corollary1: zero factor in returned triple");
        return t;
    }
    if (q == 3) {
        const Rational h1[2] = {f1(1), f1(2)};
        const Rational h2[2] = {f2(1), f2(2)};
        const Rational h3[2] = {f3(1), f3(2)};
        const Mod3Pick pick = best_mod3_triple(h1, h2, h3, n);
        return UnitTriple{3, pick.x, pick.y, pick.z, pick.sum};
    }

    // q = 3 * q' with gcd(q',3) = 1: average onto Z_{q'}^*, solve there by
    // Theorem 2, then finish with the direct mod-3 case.
    const std::uint64_t qp = q / 3;
    const UnitResidues units_qp = unit_residues(qp);
    const UnitResidues units_3 = unit_residues(3);
    const UnitFunction g1 = project_average(f1, qp, 3, units_qp, units_3);
    const UnitFunction g2 = project_average(f2, qp, 3, units_qp, units_3);
    const UnitFunction g3 = project_average(f3, qp, 3, units_qp, units_3);
    const UnitTriple t1 = solve_theorem2(qp, g1, g2, g3, n % qp);

    const Rational h1[2] = {f1(crt_combine(qp, 3, t1.x, 1)), f1(crt_combine(qp, 3, t1.x, 2))};
    const Rational h2[2] = {f2(crt_combine(qp, 3, t1.y, 1)), f2(crt_combine(qp, 3, t1.y, 2))};
    const Rational h3[2] = {f3(crt_combine(qp, 3, t1.z, 1)), f3(crt_combine(qp, 3, t1.z, 2))};
    const Mod3Pick pick = best_mod3_triple(h1, h2, h3, n % 3);

    const std::uint64_t x = crt_combine(qp, 3, t1.x, pick.x);
    const std::uint64_t y = crt_combine(qp, 3, t1.y, pick.y);
    const std::uint64_t z = crt_combine(qp, 3, t1.z, pick.z);
    return UnitTriple{q, x, y, z, pick.sum};
}

}  // namespace

std::optional<UnitTriple> oracle_best_triple(std::uint64_t q, const UnitFunction& f1,
                                             const UnitFunction& f2, const UnitFunction& f3,
                                             std::uint64_t n) {
    if (q == 0) throw std::invalid_argument("oracle_best_triple: q must be positive");
    if (f1.q() != q || f2.q() != q || f3.q() != q)
        throw std::invalid_argument("oracle_best_triple: function moduli mismatch");
    n %= q;
    if (q == 1) return UnitTriple{1, 0, 0, 0, f1(0) + f2(0) + f3(0)};

    std::vector<char> unit_mask(q, 0);
    std::vector<std::size_t> index_of(q, 0);
    const auto& residues = f3.residues();
    for (std::size_t i = 0; i < residues.size(); ++i) {
        unit_mask[residues[i]] = 1;
        index_of[residues[i]] = i;
    }

    BestTracker best;
    for (std::size_t i = 0; i < residues.size(); ++i) {
        const std::uint64_t x = residues[i];
        const Rational& v1 = f1.value_at_index(i);
        for (std::size_t j = 0; j < residues.size(); ++j) {
            const std::uint64_t y = residues[j];
            const std::uint64_t z = (n + 2 * q - x - y) % q;
            if (!unit_mask[z]) continue;
            best.offer(x, y, z, v1 + f2.value_at_index(j) + f3.value_at_index(index_of[z]));
        }
    }
    if (!best.have) return std::nullopt;
    return UnitTriple{q, best.x, best.y, best.z, best.sum};
}

}  // namespace trisum
