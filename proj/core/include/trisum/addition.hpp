#pragma once

#include "trisum/modular.hpp"
#include "trisum/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace trisum {

// Real-valued (exact rational) function on Z_q^*.  Values are stored in the
// order of unit_residues(q); evaluation anywhere outside the unit group
// returns 0.
class UnitFunction {
public:
    UnitFunction(std::uint64_t q, std::vector<Rational> values_in_residue_order);

    // Zero function on Z_q^*.
    static UnitFunction zero(std::uint64_t q);
    // Constant function on Z_q^*.
    static UnitFunction constant(std::uint64_t q, const Rational& c);

    std::uint64_t q() const { return domain_.q; }
    const std::vector<std::uint64_t>& residues() const { return domain_.residues; }
    std::size_t phi() const { return domain_.residues.size(); }

    const Rational& value_at_index(std::size_t i) const { return values_[i]; }
    Rational& value_at_index(std::size_t i) { return values_[i]; }

    // f(a) with the f(non-unit) = 0 convention.
    Rational operator()(std::uint64_t a) const;
    bool is_unit(std::uint64_t a) const;

    Rational total() const;  // sum over Z_q^*

private:
    UnitResidues domain_;
    std::vector<Rational> values_;
};

// A solution of x + y + z == n in Z_q with x, y, z units.
struct UnitTriple {
    std::uint64_t q = 1;
    std::uint64_t x = 0, y = 0, z = 0;
    Rational achieved_sum;
};

// K = (1/phi(q)) * sum_{a in Z_q^*} (f1 + f2 + f3)(a), exact.
Rational mean_K(const UnitFunction& f1, const UnitFunction& f2, const UnitFunction& f3);

// Exhaustive prime-modulus solver, p >= 5.  Returns the maximal-sum triple
// (lexicographically smallest among ties) and checks achieved_sum >= K.
UnitTriple solve_prime(std::uint64_t p, const UnitFunction& f1, const UnitFunction& f2,
                       const UnitFunction& f3, std::uint64_t n);

// Constructive solver for gcd(q,6) = 1, following the inductive proof:
// CRT splitting (largest prime power first), prime-power lifting, prime
// base case.  Guarantees achieved_sum >= mean_K.
UnitTriple solve_theorem2(std::uint64_t q, const UnitFunction& f1, const UnitFunction& f2,
                          const UnitFunction& f3, std::uint64_t n);

// Corollary 1 solver.  q squarefree odd, or 2 * (squarefree odd); values in
// [0,1] with sum(f1)+sum(f2)+sum(f3) > 2*phi(q).  Returns a triple with
// achieved_sum > 5/3 and f1(x)*f2(y)*f3(z) != 0.
UnitTriple solve_corollary1(std::uint64_t q, const UnitFunction& f1, const UnitFunction& f2,
                            const UnitFunction& f3, std::uint64_t n);

// Brute-force oracle: the best unit triple for n, or nullopt when no unit
// triple sums to n (possible only when gcd(q,6) != 1).  O(phi(q)^2).
std::optional<UnitTriple> oracle_best_triple(std::uint64_t q, const UnitFunction& f1,
                                             const UnitFunction& f2, const UnitFunction& f3,
                                             std::uint64_t n);

}  // namespace trisum
