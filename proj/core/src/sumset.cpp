#include "trisum/sumset.hpp"

#include "trisum/errors.hpp"
#include "trisum/modular.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace trisum {

ResidueSet::ResidueSet(std::uint64_t N) : N_(N), words_((N + 63) / 64, 0) {
    if (!is_prime_u64(N)) throw std::invalid_argument("ResidueSet: N must be prime");
}

ResidueSet::ResidueSet(std::uint64_t N, const std::vector<std::uint64_t>& members)
    : ResidueSet(N) {
    for (std::uint64_t x : members) insert(x);
}

void ResidueSet::insert(std::uint64_t x) {
    if (x >= N_) throw std::invalid_argument("ResidueSet::insert: residue out of range");
    std::uint64_t& w = words_[x >> 6];
    const std::uint64_t bit = 1ULL << (x & 63);
    if (!(w & bit)) {
        w |= bit;
        ++size_;
    }
}

std::vector<std::uint64_t> ResidueSet::members() const {
    std::vector<std::uint64_t> out;
    out.reserve(size_);
    for (std::uint64_t x = 0; x < N_; ++x)
        if (contains(x)) out.push_back(x);
    return out;
}

ResidueSet ResidueSet::full(std::uint64_t N) {
    ResidueSet s(N);
    for (std::uint64_t x = 0; x < N; ++x) s.insert(x);
    return s;
}

namespace {

void require_common_modulus(const std::vector<ResidueSet>& sets) {
    if (sets.empty()) throw std::invalid_argument("nu_count: need at least one set");
    if (sets.size() > kMaxSumsetArity)
        throw std::invalid_argument("nu_count: k capped at " + std::to_string(kMaxSumsetArity));
    for (const auto& s : sets)
        if (s.modulus() != sets.front().modulus())
            throw std::invalid_argument("nu_count: mismatched moduli");
}

// Exact integer cyclic convolution of per-residue counts.
std::vector<std::uint64_t> cyclic_convolve_counts(const std::vector<std::uint64_t>& a,
                                                  const std::vector<std::uint64_t>& b,
                                                  std::uint64_t N) {
    std::vector<std::uint64_t> out(N, 0);
    for (std::uint64_t x = 0; x < N; ++x) {
        if (a[x] == 0) continue;
        const std::uint64_t ax = a[x];
        for (std::uint64_t y = 0; y < N; ++y) {
            if (b[y] == 0) continue;
            std::uint64_t s = x + y;
            if (s >= N) s -= N;
            out[s] += ax * b[y];
        }
    }
    return out;
}

std::vector<std::uint64_t> indicator_counts(const ResidueSet& s) {
    std::vector<std::uint64_t> c(s.modulus(), 0);
    for (std::uint64_t x = 0; x < s.modulus(); ++x) c[x] = s.contains(x) ? 1 : 0;
    return c;
}

std::uint64_t nu_enumerate(const std::vector<ResidueSet>& sets, std::uint64_t n) {
    const std::uint64_t N = sets.front().modulus();
    const std::size_t k = sets.size();
    if (k == 1) return sets[0].contains(n) ? 1 : 0;
    std::uint64_t count = 0;
    if (k == 2) {
        for (std::uint64_t x = 0; x < N; ++x) {
            if (!sets[0].contains(x)) continue;
            const std::uint64_t y = (n + N - x % N) % N;
            if (sets[1].contains(y)) ++count;
        }
        return count;
    }
    if (k == 3) {
        for (std::uint64_t x = 0; x < N; ++x) {
            if (!sets[0].contains(x)) continue;
            for (std::uint64_t y = 0; y < N; ++y) {
                if (!sets[1].contains(y)) continue;
                const std::uint64_t z = (n + 2 * N - x - y) % N;
                if (sets[2].contains(z)) ++count;
            }
        }
        return count;
    }
    // k == 4
    for (std::uint64_t x = 0; x < N; ++x) {
        if (!sets[0].contains(x)) continue;
        for (std::uint64_t y = 0; y < N; ++y) {
            if (!sets[1].contains(y)) continue;
            for (std::uint64_t z = 0; z < N; ++z) {
                if (!sets[2].contains(z)) continue;
                const std::uint64_t w = (n + 3 * N - x - y - z) % N;
                if (sets[3].contains(w)) ++count;
            }
        }
    }
    return count;
}

}  // namespace

std::vector<std::uint64_t> nu_counts_all(const std::vector<ResidueSet>& sets) {
    require_common_modulus(sets);
    const std::uint64_t N = sets.front().modulus();
    std::vector<std::uint64_t> acc = indicator_counts(sets[0]);
    for (std::size_t i = 1; i < sets.size(); ++i)
        acc = cyclic_convolve_counts(acc, indicator_counts(sets[i]), N);
    return acc;
}

std::uint64_t nu_count(const std::vector<ResidueSet>& sets, std::uint64_t n, NuMode mode) {
    require_common_modulus(sets);
    const std::uint64_t N = sets.front().modulus();
    n %= N;
    if (mode == NuMode::Enumerate || (mode == NuMode::Auto && sets.size() <= 2)) {
        if (sets.size() > 4)
            throw std::invalid_argument("nu_count: enumerate mode limited to k <= 4");
        return nu_enumerate(sets, n);
    }
    return nu_counts_all(sets)[n];
}

PollardReport pollard_check(const ResidueSet& A, const ResidueSet& B, std::uint64_t t) {
    if (A.modulus() != B.modulus())
        throw std::invalid_argument("pollard_check: mismatched moduli");
    const std::uint64_t bound = std::min(A.size(), B.size());
    if (t < 1 || t > bound)
        throw std::invalid_argument("pollard_check: t must lie in [1, min(|A|,|B|)]");

    const std::uint64_t N = A.modulus();
    const std::vector<std::uint64_t> nu = nu_counts_all({A, B});

    PollardReport rep;
    rep.N = N;
    rep.t = t;
    rep.level_set_sizes.assign(t, 0);
    for (std::uint64_t x = 0; x < N; ++x) {
        const std::uint64_t levels = std::min<std::uint64_t>(nu[x], t);
        for (std::uint64_t i = 0; i < levels; ++i) ++rep.level_set_sizes[i];
    }
    rep.lhs = 0;
    for (std::uint64_t s : rep.level_set_sizes) rep.lhs += s;
    rep.rhs = std::min(t * N, t * (A.size() + B.size() - t));
    rep.holds = rep.lhs >= rep.rhs;
    return rep;
}

Rational lemma3_theta(const std::vector<Rational>& theta_list) {
    const std::size_t k = theta_list.size();
    if (k < 2) throw std::invalid_argument("lemma3_theta: k must be >= 2");
    Rational sum(0);
    for (const auto& th : theta_list) {
        if (th <= 0 || th > 1)
            throw std::invalid_argument("lemma3_theta: densities must lie in (0,1]");
        sum += th;
    }
    if (sum <= 1)
        throw hypothesis_error("lemma3_theta: density sum " + rational_to_string(sum) +
                               " is not > 1");
    Rational theta = *std::min_element(theta_list.begin(), theta_list.end());
    const Rational alt = (sum - 1) / Rational(3 * k - 5);
    return std::min(theta, alt);
}

Lemma3Report lemma3_verify(const std::vector<ResidueSet>& sets, std::uint64_t n,
                           std::vector<Rational> theta_list) {
    require_common_modulus(sets);
    const std::size_t k = sets.size();
    if (k < 2) throw std::invalid_argument("lemma3_verify: k must be >= 2");
    const std::uint64_t N = sets.front().modulus();
    n %= N;

    Lemma3Report rep;
    rep.N = N;
    rep.k = k;
    rep.n = n;

    if (theta_list.empty()) {
        for (const auto& s : sets) theta_list.emplace_back(s.size(), N);  // tightest choice
    }
    if (theta_list.size() != k)
        throw std::invalid_argument("lemma3_verify: theta_list size mismatch");
    rep.theta_list = theta_list;

    rep.hypothesis_met = true;
    Rational sum(0);
    for (std::size_t i = 0; i < k; ++i) {
        const Rational& th = theta_list[i];
        if (th <= 0 || th > 1) {
            rep.hypothesis_met = false;
            rep.hypothesis_note = "theta_" + std::to_string(i + 1) + " outside (0,1]";
        }
        // |X_i| >= theta_i * N, exact.
        if (Rational(sets[i].size()) < th * Rational(N)) {
            rep.hypothesis_met = false;
            rep.hypothesis_note = "|X_" + std::to_string(i + 1) + "| < theta_i * N";
        }
        sum += th;
    }
    if (sum <= 1) {
        rep.hypothesis_met = false;
        rep.hypothesis_note = "density sum <= 1";
        rep.theta = 0;
    } else {
        Rational theta = *std::min_element(theta_list.begin(), theta_list.end());
        rep.theta = std::min(theta, (sum - 1) / Rational(3 * k - 5));
        // N > 2 / theta^2
        if (Rational(N) * rep.theta * rep.theta <= 2) {
            rep.hypothesis_met = false;
            rep.hypothesis_note = "N <= 2/theta^2";
        }
        if (k >= 3) {
            // theta_* = min{th1+th2-3theta, th3.., (sum-3theta-1)/(3k-8)} from
            // the proof, after sorting densities decreasingly.
            std::vector<Rational> sorted = theta_list;
            std::sort(sorted.begin(), sorted.end(), std::greater<Rational>());
            Rational ts = sorted[0] + sorted[1] - 3 * rep.theta;
            for (std::size_t i = 2; i < k; ++i) ts = std::min(ts, sorted[i]);
            if (3 * k > 8)
                ts = std::min(ts, (sum - 3 * rep.theta - 1) / Rational(3 * k - 8));
            rep.theta_star = ts;
            rep.has_theta_star = true;
        }
    }

    // bound = theta^{2k-3} * N^{k-1}
    Rational bound(1);
    for (std::size_t i = 0; i < 2 * k - 3; ++i) bound *= rep.theta;
    for (std::size_t i = 0; i + 1 < k; ++i) bound *= Rational(N);
    rep.bound = bound;

    rep.actual = nu_count(sets, n, NuMode::Convolve);
    rep.holds = Rational(rep.actual) >= rep.bound;

    if (k == 2)
        rep.k2_direct_bound = static_cast<std::int64_t>(sets[0].size() + sets[1].size()) -
                              static_cast<std::int64_t>(N);
    return rep;
}

}  // namespace trisum
