#include "trisum/prime_sets.hpp"

#include "trisum/errors.hpp"
#include "trisum/modular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace trisum {

PrimeSubsetSpec PrimeSubsetSpec::all_primes() { return PrimeSubsetSpec{}; }

PrimeSubsetSpec PrimeSubsetSpec::residue_classes(std::uint64_t m,
                                                 std::vector<std::uint64_t> rs) {
    if (m == 0) throw std::invalid_argument("residue_classes: zero modulus");
    PrimeSubsetSpec s;
    s.kind = Kind::ResidueClasses;
    s.modulus = m;
    for (auto& r : rs) r %= m;
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    s.residues = std::move(rs);
    return s;
}

PrimeSubsetSpec PrimeSubsetSpec::exclude(PrimeSubsetSpec base,
                                         std::vector<std::uint64_t> primes) {
    PrimeSubsetSpec s;
    s.kind = Kind::ExcludePrimes;
    s.base = std::make_shared<PrimeSubsetSpec>(std::move(base));
    std::sort(primes.begin(), primes.end());
    s.primes = std::move(primes);
    return s;
}

PrimeSubsetSpec PrimeSubsetSpec::block_union(
    PrimeSubsetSpec base, std::vector<std::pair<std::uint64_t, std::uint64_t>> iv) {
    PrimeSubsetSpec s;
    s.kind = Kind::BlockUnion;
    s.base = std::make_shared<PrimeSubsetSpec>(std::move(base));
    for (const auto& [lo, hi] : iv)
        if (lo > hi) throw std::invalid_argument("block_union: empty interval");
    std::sort(iv.begin(), iv.end());
    s.intervals = std::move(iv);
    return s;
}

PrimeSubsetSpec PrimeSubsetSpec::difference(PrimeSubsetSpec base, PrimeSubsetSpec removal) {
    PrimeSubsetSpec s;
    s.kind = Kind::Difference;
    s.base = std::make_shared<PrimeSubsetSpec>(std::move(base));
    s.removal = std::make_shared<PrimeSubsetSpec>(std::move(removal));
    return s;
}

PrimeSubsetSpec PrimeSubsetSpec::explicit_list(std::vector<std::uint64_t> primes) {
    PrimeSubsetSpec s;
    s.kind = Kind::ExplicitList;
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    s.primes = std::move(primes);
    return s;
}

PrimeSubsetSpec PrimeSubsetSpec::sieve_filtered(PrimeSubsetSpec base,
                                                std::vector<std::uint64_t> targets) {
    PrimeSubsetSpec s;
    s.kind = Kind::SieveFiltered;
    s.base = std::make_shared<PrimeSubsetSpec>(std::move(base));
    std::sort(targets.begin(), targets.end());
    s.targets = std::move(targets);
    return s;
}

namespace {

const char* kind_name(PrimeSubsetSpec::Kind k) {
    switch (k) {
        case PrimeSubsetSpec::Kind::AllPrimes: return "all_primes";
        case PrimeSubsetSpec::Kind::ResidueClasses: return "residue_classes";
        case PrimeSubsetSpec::Kind::ExcludePrimes: return "exclude_primes";
        case PrimeSubsetSpec::Kind::BlockUnion: return "block_union";
        case PrimeSubsetSpec::Kind::Difference: return "difference";
        case PrimeSubsetSpec::Kind::ExplicitList: return "explicit_list";
        case PrimeSubsetSpec::Kind::SieveFiltered: return "sieve_filtered";
    }
    return "?";
}

PrimeSubsetSpec::Kind kind_from_name(const std::string& name) {
    for (auto k : {PrimeSubsetSpec::Kind::AllPrimes, PrimeSubsetSpec::Kind::ResidueClasses,
                   PrimeSubsetSpec::Kind::ExcludePrimes, PrimeSubsetSpec::Kind::BlockUnion,
                   PrimeSubsetSpec::Kind::Difference, PrimeSubsetSpec::Kind::ExplicitList,
                   PrimeSubsetSpec::Kind::SieveFiltered}) {
        if (name == kind_name(k)) return k;
    }
    throw std::invalid_argument("PrimeSubsetSpec: unknown kind \"" + name + "\"");
}

}  // namespace

void to_json(nlohmann::json& j, const PrimeSubsetSpec& s) {
    j = nlohmann::json{{"kind", kind_name(s.kind)}};
    switch (s.kind) {
        case PrimeSubsetSpec::Kind::AllPrimes: break;
        case PrimeSubsetSpec::Kind::ResidueClasses:
            j["modulus"] = s.modulus;
            j["residues"] = s.residues;
            break;
        case PrimeSubsetSpec::Kind::ExcludePrimes:
            j["base"] = *s.base;
            j["primes"] = s.primes;
            break;
        case PrimeSubsetSpec::Kind::BlockUnion: {
            j["base"] = *s.base;
            nlohmann::json iv = nlohmann::json::array();
            for (const auto& [lo, hi] : s.intervals) iv.push_back({lo, hi});
            j["intervals"] = std::move(iv);
            break;
        }
        case PrimeSubsetSpec::Kind::Difference:
            j["base"] = *s.base;
            j["removal"] = *s.removal;
            break;
        case PrimeSubsetSpec::Kind::ExplicitList:
            j["primes"] = s.primes;
            break;
        case PrimeSubsetSpec::Kind::SieveFiltered:
            j["base"] = *s.base;
            j["targets"] = s.targets;
            break;
    }
}

void from_json(const nlohmann::json& j, PrimeSubsetSpec& s) {
    const auto kind = kind_from_name(j.at("kind").get<std::string>());
    switch (kind) {
        case PrimeSubsetSpec::Kind::AllPrimes:
            s = PrimeSubsetSpec::all_primes();
            break;
        case PrimeSubsetSpec::Kind::ResidueClasses:
            s = PrimeSubsetSpec::residue_classes(
                j.at("modulus").get<std::uint64_t>(),
                j.at("residues").get<std::vector<std::uint64_t>>());
            break;
        case PrimeSubsetSpec::Kind::ExcludePrimes:
            s = PrimeSubsetSpec::exclude(j.at("base").get<PrimeSubsetSpec>(),
                                         j.at("primes").get<std::vector<std::uint64_t>>());
            break;
        case PrimeSubsetSpec::Kind::BlockUnion: {
            std::vector<std::pair<std::uint64_t, std::uint64_t>> iv;
            for (const auto& e : j.at("intervals"))
                iv.emplace_back(e.at(0).get<std::uint64_t>(), e.at(1).get<std::uint64_t>());
            s = PrimeSubsetSpec::block_union(j.at("base").get<PrimeSubsetSpec>(), std::move(iv));
            break;
        }
        case PrimeSubsetSpec::Kind::Difference:
            s = PrimeSubsetSpec::difference(j.at("base").get<PrimeSubsetSpec>(),
                                            j.at("removal").get<PrimeSubsetSpec>());
            break;
        case PrimeSubsetSpec::Kind::ExplicitList:
            s = PrimeSubsetSpec::explicit_list(j.at("primes").get<std::vector<std::uint64_t>>());
            break;
        case PrimeSubsetSpec::Kind::SieveFiltered:
            s = PrimeSubsetSpec::sieve_filtered(
                j.at("base").get<PrimeSubsetSpec>(),
                j.at("targets").get<std::vector<std::uint64_t>>());
            break;
    }
}

bool spec_contains(const PrimeSubsetSpec& spec, std::uint64_t p, const PrimeSieve& sieve) {
    switch (spec.kind) {
        case PrimeSubsetSpec::Kind::AllPrimes:
            return true;
        case PrimeSubsetSpec::Kind::ResidueClasses:
            return std::binary_search(spec.residues.begin(), spec.residues.end(),
                                      p % spec.modulus);
        case PrimeSubsetSpec::Kind::ExcludePrimes:
            return !std::binary_search(spec.primes.begin(), spec.primes.end(), p) &&
                   spec_contains(*spec.base, p, sieve);
        case PrimeSubsetSpec::Kind::BlockUnion: {
            bool inside = false;
            for (const auto& [lo, hi] : spec.intervals) {
                if (p < lo) break;  // intervals sorted by lo
                if (p <= hi) {
                    inside = true;
                    break;
                }
            }
            return inside && spec_contains(*spec.base, p, sieve);
        }
        case PrimeSubsetSpec::Kind::Difference:
            return spec_contains(*spec.base, p, sieve) && !spec_contains(*spec.removal, p, sieve);
        case PrimeSubsetSpec::Kind::ExplicitList:
            return std::binary_search(spec.primes.begin(), spec.primes.end(), p);
        case PrimeSubsetSpec::Kind::SieveFiltered: {
            if (!spec_contains(*spec.base, p, sieve)) return false;
            for (std::uint64_t t : spec.targets) {
                if (t <= p + 1) continue;  // t - p <= 1 is never prime
                if (t - p > sieve.limit())
                    throw std::invalid_argument(
                        "spec_contains: sieve too small for SieveFiltered target");
                if (sieve.is_prime(t - p)) return false;
            }
            return true;
        }
    }
    return false;
}

std::vector<std::uint64_t> materialize(const PrimeSubsetSpec& spec, std::uint64_t x,
                                       const PrimeSieve& sieve) {
    if (x > sieve.limit())
        throw std::invalid_argument("materialize: bound exceeds sieve range");
    std::vector<std::uint64_t> out;
    if (spec.kind == PrimeSubsetSpec::Kind::ExplicitList) {
        for (std::uint64_t p : spec.primes)
            if (p <= x && sieve.is_prime(p)) out.push_back(p);
        return out;
    }
    sieve.for_each_prime(2, x, [&](std::uint64_t p) {
        if (spec_contains(spec, p, sieve)) out.push_back(p);
    });
    return out;
}

DensityProfile relative_density_profile(const PrimeSubsetSpec& spec, std::uint64_t x_max,
                                        std::size_t grid_size, const PrimeSieve& sieve) {
    if (x_max < 100) throw std::invalid_argument("relative_density_profile: x_max >= 100");
    if (grid_size < 2) throw std::invalid_argument("relative_density_profile: grid_size >= 2");
    if (x_max > sieve.limit())
        throw std::invalid_argument("relative_density_profile: x_max exceeds sieve range");

    DensityProfile prof;
    const double lo = 100.0;
    for (std::size_t j = 0; j < grid_size; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(grid_size - 1);
        const double x = lo * std::pow(static_cast<double>(x_max) / lo, t);
        const auto xi = static_cast<std::uint64_t>(std::llround(x));
        if (prof.grid.empty() || xi > prof.grid.back()) prof.grid.push_back(xi);
    }
    if (prof.grid.back() != x_max) prof.grid.push_back(x_max);

    prof.subset_counts.assign(prof.grid.size(), 0);
    prof.prime_counts.assign(prof.grid.size(), 0);
    std::uint64_t subset_acc = 0, prime_acc = 0;
    std::size_t gi = 0;
    sieve.for_each_prime(2, x_max, [&](std::uint64_t p) {
        while (gi < prof.grid.size() && p > prof.grid[gi]) {
            prof.subset_counts[gi] = subset_acc;
            prof.prime_counts[gi] = prime_acc;
            ++gi;
        }
        ++prime_acc;
        if (spec_contains(spec, p, sieve)) ++subset_acc;
    });
    for (; gi < prof.grid.size(); ++gi) {
        prof.subset_counts[gi] = subset_acc;
        prof.prime_counts[gi] = prime_acc;
    }

    prof.ratios.reserve(prof.grid.size());
    for (std::size_t j = 0; j < prof.grid.size(); ++j) {
        prof.ratios.push_back(prof.prime_counts[j] == 0
                                  ? 0.0
                                  : static_cast<double>(prof.subset_counts[j]) /
                                        static_cast<double>(prof.prime_counts[j]));
    }
    const std::size_t tail_start = prof.grid.size() / 2;
    prof.empirical_lower = prof.ratios[tail_start];
    prof.empirical_upper = prof.ratios[tail_start];
    for (std::size_t j = tail_start; j < prof.ratios.size(); ++j) {
        prof.empirical_lower = std::min(prof.empirical_lower, prof.ratios[j]);
        prof.empirical_upper = std::max(prof.empirical_upper, prof.ratios[j]);
    }
    return prof;
}

std::string density_profile_csv(const DensityProfile& profile) {
    std::ostringstream os;
    os << "x,subset_count,prime_count,ratio\n";
    char buf[64];
    for (std::size_t j = 0; j < profile.grid.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.12g", profile.ratios[j]);
        os << profile.grid[j] << ',' << profile.subset_counts[j] << ','
           << profile.prime_counts[j] << ',' << buf << '\n';
    }
    return os.str();
}

WTrick W_of(std::uint64_t n, std::optional<std::uint64_t> w_override) {
    if (n < 3) throw std::invalid_argument("W_of: n >= 3 required");
    WTrick wt;
    if (w_override) {
        if (*w_override < 2) throw std::invalid_argument("W_of: override w must be >= 2");
        wt.w = *w_override;
        wt.overridden = true;
    } else {
        const double formula = std::floor(std::log(std::log(static_cast<double>(n))) / 4.0);
        wt.w = std::max<std::uint64_t>(
            formula > 0 ? static_cast<std::uint64_t>(formula) : 0, 3);
    }
    wt.W = 1;
    for (std::uint64_t p = 2; p <= wt.w; ++p) {
        if (!is_prime_u64(p)) continue;
        if (wt.W > std::numeric_limits<std::uint64_t>::max() / p)
            throw std::invalid_argument("W_of: W overflows");
        wt.W *= p;
    }
    if (wt.overridden) {
        if (wt.W > n / 100)
            throw std::invalid_argument("W_of: override makes W > n/100 (degenerate pipeline)");
    } else if (static_cast<double>(wt.W) > std::log(static_cast<double>(n))) {
        throw hypothesis_error("W_of: W = " + std::to_string(wt.W) +
                               " exceeds log n; supply a w override for small n");
    }
    return wt;
}

SingularSeries singular_series(std::uint64_t n, std::uint64_t prime_cutoff,
                               const PrimeSieve& sieve) {
    if (n < 3) throw std::invalid_argument("singular_series: n >= 3 required");
    if (prime_cutoff < 2) throw std::invalid_argument("singular_series: cutoff >= 2");
    if (prime_cutoff > sieve.limit())
        throw std::invalid_argument("singular_series: cutoff exceeds sieve range");

    SingularSeries out;
    double value = 1.0;
    sieve.for_each_prime(2, prime_cutoff, [&](std::uint64_t p) {
        const double pm1 = static_cast<double>(p - 1);
        if (n % p == 0)
            value *= 1.0 - 1.0 / (pm1 * pm1);
        else
            value *= 1.0 + 1.0 / (pm1 * pm1 * pm1);
    });
    out.value = value;

    const double C = static_cast<double>(prime_cutoff);
    const double hi = std::expm1(0.5 / ((C - 1.0) * (C - 1.0)));
    const double k = std::floor(std::log(static_cast<double>(n)) / std::log(C));
    const double lo = 1.0 - std::pow(1.0 - 1.0 / (C * C), k);
    out.tail_bound = std::max(hi, lo);
    return out;
}

TripleCount vinogradov_weighted_count(std::uint64_t n, const PrimeSieve& sieve) {
    if (n > 1'000'000ULL)
        throw std::invalid_argument("vinogradov_weighted_count: n capped at 1e6");
    if (n > sieve.limit())
        throw std::invalid_argument("vinogradov_weighted_count: n exceeds sieve range");

    TripleCount out;
    const auto primes = sieve.primes_leq(n);
    double sum = 0.0, comp = 0.0;  // Neumaier compensation
    auto add = [&](double term) {
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
    };
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const std::uint64_t p1 = primes[i];
        if (3 * p1 > n) break;
        const double lp1 = std::log(static_cast<double>(p1));
        for (std::size_t j = i; j < primes.size(); ++j) {
            const std::uint64_t p2 = primes[j];
            if (p1 + 2 * p2 > n) break;
            const std::uint64_t p3 = n - p1 - p2;
            if (!sieve.is_prime(p3)) continue;
            const unsigned mult = (p1 == p2 && p2 == p3) ? 1 : (p1 == p2 || p2 == p3) ? 3 : 6;
            out.r += mult;
            const double lp2 = std::log(static_cast<double>(p2));
            const double lp3 = std::log(static_cast<double>(p3));
            add(static_cast<double>(mult) * lp1 * lp2 * lp3);
        }
    }
    out.weighted = sum + comp;
    return out;
}

PairCountTable::PairCountTable(std::uint64_t n_max, const PrimeSieve& sieve) : n_max_(n_max) {
    if (n_max > sieve.limit())
        throw std::invalid_argument("PairCountTable: n_max exceeds sieve range");
    pair_counts_.assign(n_max + 1, 0);
    const auto primes = sieve.primes_leq(n_max);
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const std::uint64_t p = primes[i];
        if (2 * p > n_max) break;
        for (std::size_t j = i; j < primes.size(); ++j) {
            const std::uint64_t s = p + primes[j];
            if (s > n_max) break;
            pair_counts_[s] += (i == j) ? 1 : 2;
        }
    }
}

std::uint64_t PairCountTable::r(std::uint64_t n, const PrimeSieve& sieve) const {
    if (n > n_max_) throw std::invalid_argument("PairCountTable::r: n out of range");
    std::uint64_t total = 0;
    sieve.for_each_prime(2, n, [&](std::uint64_t p3) {
        total += pair_counts_[n - p3];
    });
    return total;
}

namespace {

std::optional<Representation> lex_witness(std::uint64_t n,
                                          const std::vector<std::uint64_t>& s1,
                                          const std::vector<std::uint64_t>& s2,
                                          const std::vector<char>& mask3) {
    for (std::uint64_t p1 : s1) {
        if (p1 + 4 > n) break;
        for (std::uint64_t p2 : s2) {
            if (p1 + p2 + 2 > n) break;
            const std::uint64_t p3 = n - p1 - p2;
            if (p3 < mask3.size() && mask3[p3]) return Representation{p1, p2, p3};
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<Representation> find_representation(std::uint64_t n, const PrimeSubsetSpec& s1,
                                                  const PrimeSubsetSpec& s2,
                                                  const PrimeSubsetSpec& s3,
                                                  const PrimeSieve& sieve) {
    if (n > 100'000'000ULL)
        throw std::invalid_argument("find_representation: n capped at 1e8");
    if (n > sieve.limit())
        throw std::invalid_argument("find_representation: n exceeds sieve range");
    if (n < 6) return std::nullopt;
    const auto list1 = materialize(s1, n - 4, sieve);
    const auto list2 = materialize(s2, n - 4, sieve);
    std::vector<char> mask3(n + 1, 0);
    for (std::uint64_t p : materialize(s3, n, sieve)) mask3[p] = 1;
    return lex_witness(n, list1, list2, mask3);
}

std::vector<SurveyRow> representation_survey(std::uint64_t n_lo, std::uint64_t n_hi,
                                             const PrimeSubsetSpec& s1,
                                             const PrimeSubsetSpec& s2,
                                             const PrimeSubsetSpec& s3,
                                             const PrimeSieve& sieve) {
    if (n_hi > sieve.limit())
        throw std::invalid_argument("representation_survey: n_hi exceeds sieve range");
    if (n_lo > n_hi) throw std::invalid_argument("representation_survey: empty range");

    const auto list1 = materialize(s1, n_hi, sieve);
    const auto list2 = materialize(s2, n_hi, sieve);
    const auto list3 = materialize(s3, n_hi, sieve);
    std::vector<char> mask3(n_hi + 1, 0);
    for (std::uint64_t p : list3) mask3[p] = 1;

    // Exact bitmap of S1 + S2 restricted to [0, n_hi]; NONE rows below rely
    // on it being complete.
    std::vector<std::uint64_t> bitmap12((n_hi + 64) / 64, 0);
    for (std::uint64_t p1 : list1) {
        if (p1 + 2 > n_hi) break;
        for (std::uint64_t p2 : list2) {
            const std::uint64_t s = p1 + p2;
            if (s > n_hi) break;
            bitmap12[s >> 6] |= 1ULL << (s & 63);
        }
    }
    auto sum12 = [&](std::uint64_t s) {
        return (bitmap12[s >> 6] >> (s & 63)) & 1ULL;
    };

    std::vector<SurveyRow> rows;
    for (std::uint64_t n = n_lo | 1ULL; n <= n_hi; n += 2) {
        SurveyRow row;
        row.n = n;
        bool found = false;
        for (std::uint64_t p3 : list3) {
            if (p3 + 4 > n) break;
            if (sum12(n - p3)) {
                found = true;
                break;
            }
        }
        if (found) row.witness = lex_witness(n, list1, list2, mask3);
        rows.push_back(std::move(row));
    }
    return rows;
}

BinaryCounterexample binary_counterexample(std::uint64_t w, std::uint64_t x_max,
                                           std::uint64_t x_density, const PrimeSieve& sieve) {
    if (w < 3 || w > 50)
        throw std::invalid_argument("binary_counterexample: w must lie in [3, 50]");
    if (std::max(x_max, x_density) > sieve.limit())
        throw std::invalid_argument("binary_counterexample: bounds exceed sieve range");

    BinaryCounterexample ce;
    ce.w = w;
    ce.x_max = x_max;
    ce.x_density = x_density;

    std::vector<std::uint64_t> odd_primes;
    for (std::uint64_t p = 3; p <= w; p += 2)
        if (is_prime_u64(p)) odd_primes.push_back(p);
    ce.W_odd = 1;
    for (std::uint64_t p : odd_primes) ce.W_odd *= p;
    ce.W_full = 2 * ce.W_odd;
    if (ce.W_odd > 10'000'000ULL)
        throw std::invalid_argument(
            "binary_counterexample: residue class list infeasible for this w");

    // P1 = primes greater than w; P2 = primes == 1 (mod p') for some odd
    // prime p' <= w, encoded as residue classes modulo W_odd.
    std::vector<char> marked(ce.W_odd, 0);
    for (std::uint64_t p : odd_primes)
        for (std::uint64_t r = 1; r < ce.W_odd; r += p) marked[r] = 1;
    std::vector<std::uint64_t> classes;
    for (std::uint64_t r = 0; r < ce.W_odd; ++r)
        if (marked[r]) classes.push_back(r);

    ce.p1_spec = PrimeSubsetSpec::block_union(
        PrimeSubsetSpec::all_primes(), {{w + 1, std::numeric_limits<std::int64_t>::max()}});
    ce.p2_spec = PrimeSubsetSpec::residue_classes(ce.W_odd, std::move(classes));

    const auto list1 = materialize(ce.p1_spec, x_max, sieve);
    std::vector<char> mask2(x_max + 1, 0);
    for (std::uint64_t p : materialize(ce.p2_spec, x_max, sieve)) mask2[p] = 1;

    auto check_target = [&](std::uint64_t m) {
        for (std::uint64_t p1 : list1) {
            if (p1 + 2 > m) break;
            if (mask2[m - p1]) return false;
        }
        return true;
    };
    for (std::uint64_t k = 1; ce.W_full * k + 1 <= x_max; k += 2) {
        ++ce.targets_checked;
        const std::uint64_t m = ce.W_full * k + 1;
        if (!check_target(m)) ce.violations.push_back(m);
    }
    for (std::uint64_t k = 1; ce.W_odd * k + 1 <= x_max; k += 2) {
        ++ce.paper_targets_checked;
        const std::uint64_t m = ce.W_odd * k + 1;
        if (!check_target(m)) ce.paper_violations.push_back(m);
    }

    // Relative densities at x_density.
    std::uint64_t c1 = 0, c2 = 0, cp = 0;
    sieve.for_each_prime(2, x_density, [&](std::uint64_t p) {
        ++cp;
        if (p > w) ++c1;
        if (spec_contains(ce.p2_spec, p, sieve)) ++c2;
    });
    ce.d1 = static_cast<double>(c1) / static_cast<double>(cp);
    ce.d2 = static_cast<double>(c2) / static_cast<double>(cp);
    ce.theoretical_gap = 1.0;
    for (std::uint64_t p : odd_primes)
        ce.theoretical_gap *= static_cast<double>(p - 2) / static_cast<double>(p - 1);
    ce.density_ok = ce.d1 + ce.d2 > 2.0 - ce.theoretical_gap - 0.05;
    return ce;
}

std::vector<std::uint64_t> paper_block_schedule(std::size_t k_max, std::uint64_t value_cap) {
    std::vector<std::uint64_t> schedule;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double lk = std::log(static_cast<double>(k));
        const double v = std::exp(static_cast<double>(k) * std::sqrt(std::max(lk, 0.0)));
        if (v > static_cast<double>(value_cap) / 2.0)
            throw std::invalid_argument("paper_block_schedule: schedule exceeds value cap at k=" +
                                        std::to_string(k));
        const auto nk = 2 * static_cast<std::uint64_t>(std::floor(v));
        if (!schedule.empty() && nk <= schedule.back())
            throw std::invalid_argument("paper_block_schedule: schedule not strictly increasing");
        schedule.push_back(nk);
    }
    return schedule;
}

BlocksCounterexample blocks_counterexample(const std::vector<std::uint64_t>& schedule,
                                           const PrimeSieve& sieve) {
    if (schedule.size() < 3)
        throw std::invalid_argument("blocks_counterexample: need at least three schedule values");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i] <= schedule[i - 1])
            throw std::invalid_argument("blocks_counterexample: schedule not strictly increasing");
    const std::size_t K = schedule.size();
    const std::uint64_t max_target = schedule[K - 1] + schedule[K - 2] + 2;
    if (max_target > sieve.limit())
        throw std::invalid_argument("blocks_counterexample: schedule exceeds sieve range");

    BlocksCounterexample ce;
    ce.schedule = schedule;

    std::vector<std::uint64_t> members;
    const std::uint64_t mask_hi = schedule.back();
    std::vector<char> in_p(mask_hi + 1, 0);

    // 1-based block index k in [2, K-1]; each block filters by its own n_k.
    for (std::size_t k = 2; k + 1 <= K; ++k) {
        BlockInfo info;
        info.k = k;
        info.lo = schedule[k - 1] + 2 * schedule[k - 2];
        info.hi = schedule[k];
        info.n_k = schedule[k] + schedule[k - 1] + 2;
        if (info.lo <= info.hi) {
            sieve.for_each_prime(info.lo, info.hi, [&](std::uint64_t p) {
                if (!sieve.is_prime(info.n_k - p)) {
                    ++info.block_size;
                    members.push_back(p);
                    in_p[p] = 1;
                }
            });
        }
        sieve.for_each_prime(2, info.n_k, [&](std::uint64_t p) {
            if (sieve.is_prime(info.n_k - p)) ++info.a_k_size;
        });
        ce.blocks.push_back(info);
    }

    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    // Exported spec: the exact member list (each block filters by a
    // different target, so no single SieveFiltered term describes the union).
    ce.p_spec = PrimeSubsetSpec::explicit_list(members);

    ce.all_verified = true;
    for (auto& info : ce.blocks) {
        info.pair_free_within_block = true;
        info.pair_free_full = true;
        for (std::uint64_t p : members) {
            if (2 * p > info.n_k) break;
            const std::uint64_t q = info.n_k - p;
            if (q <= mask_hi && in_p[q]) {
                info.pair_free_full = false;
                if (p >= info.lo && p <= info.hi && q >= info.lo && q <= info.hi)
                    info.pair_free_within_block = false;
            }
        }
        ce.all_verified = ce.all_verified && info.pair_free_full && info.pair_free_within_block;
    }
    return ce;
}

}  // namespace trisum
