#include "trisum/transfer.hpp"

#include "trisum/addition.hpp"
#include "trisum/errors.hpp"
#include "trisum/format.hpp"
#include "trisum/modular.hpp"
#include "trisum/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace trisum {

namespace {

// Reports carry floats rounded to 12 significant digits.
double jnum(double x) { return round_sig12(x); }

double neumaier(const std::vector<double>& xs) { return compensated_sum(xs); }

struct KahanAcc {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace

double WeightVector::total_mass() const { return neumaier(values); }

WeightVector WeightVector::uniform(std::uint64_t N, double mass) {
    WeightVector v;
    v.N = N;
    v.values.assign(N, mass / static_cast<double>(N));
    return v;
}

WeightVector WeightVector::delta_at(std::uint64_t N, std::uint64_t x, double mass) {
    WeightVector v;
    v.N = N;
    v.values.assign(N, 0.0);
    v.values.at(x) = mass;
    return v;
}

DerivedParameters derive_parameters(double d1, double d2, double d3) {
    for (double d : {d1, d2, d3})
        if (!(d > 0.0) || d > 1.0)
            throw std::invalid_argument("derive_parameters: densities must lie in (0,1]");
    const double sum = d1 + d2 + d3;
    if (!(sum > 2.0))
        throw hypothesis_error("derive_parameters: density sum must exceed 2, got " +
                               std::to_string(sum));
    DerivedParameters out;
    out.kappa = 1e-4 * (sum - 2.0);
    const double denom = 1.0 + 2.0 * out.kappa;
    out.alpha = {d1 / denom, d2 / denom, d3 / denom};
    return out;
}

LocalDensity local_density_f(const PrimeSubsetSpec& spec, std::uint64_t n, std::uint64_t W,
                             std::uint64_t b, double kappa, const PrimeSieve& sieve) {
    if (gcd_u64(b % W, W) != 1)
        throw std::invalid_argument("local_density_f: gcd(b, W) must be 1");
    const std::uint64_t x_hi = (2 * n) / 3;
    if (x_hi > sieve.limit())
        throw std::invalid_argument("local_density_f: sieve does not cover 2n/3");

    KahanAcc acc;
    for (std::uint64_t x = b % W == 0 ? W : b % W; x <= x_hi; x += W) {
        if (sieve.is_prime(x) && spec_contains(spec, x, sieve))
            acc.add(std::log(static_cast<double>(x)));
    }
    const double phiW = static_cast<double>(euler_phi(factorize(W)));
    LocalDensity out;
    out.raw = (3.0 * phiW / (2.0 * static_cast<double>(n))) * acc.value() - 3.0 * kappa;
    out.value = std::max(0.0, out.raw);
    out.exceeds_one = out.value > 1.0;
    return out;
}

ResidueChoice choose_residues(const std::vector<double>& f1, const std::vector<double>& f2,
                              const std::vector<double>& f3, std::uint64_t W, std::uint64_t n) {
    const UnitResidues units = unit_residues(W);
    const std::size_t phi = units.residues.size();
    if (f1.size() != phi || f2.size() != phi || f3.size() != phi)
        throw std::invalid_argument("choose_residues: tables must have phi(W) entries");

    auto rationalize = [&](const std::vector<double>& f) {
        std::vector<Rational> vals;
        vals.reserve(phi);
        for (double v : f) {
            const double clipped = std::clamp(v, 0.0, 1.0);
            vals.push_back(rational_from_double(clipped));
        }
        return UnitFunction(W, std::move(vals));
    };
    const UnitFunction g1 = rationalize(f1);
    const UnitFunction g2 = rationalize(f2);
    const UnitFunction g3 = rationalize(f3);

    const UnitTriple t = solve_corollary1(W, g1, g2, g3, n % W);

    ResidueChoice out;
    out.b = {t.x, t.y, t.z};
    out.f_clipped = {rational_to_double(g1(t.x)), rational_to_double(g2(t.y)),
                     rational_to_double(g3(t.z))};
    out.corollary_sum = t.achieved_sum;
    if ((t.x + t.y + t.z) % W != n % W)
        throw internal_check_error("choose_residues: congruence b1+b2+b3 == n (mod W) violated");
    return out;
}

std::uint64_t choose_modulus_N(std::uint64_t n, std::uint64_t W, double kappa,
                               TransferConfig::NPolicy policy) {
    const long double base = static_cast<long double>(n) / static_cast<long double>(W);
    const long double lo = (1.0L + static_cast<long double>(kappa)) * base;
    const long double hi = (1.0L + 2.0L * static_cast<long double>(kappa)) * base;
    const auto lo_int = static_cast<std::uint64_t>(std::ceil(lo));
    const auto hi_int = static_cast<std::uint64_t>(std::floor(hi));
    std::uint64_t found = 0;
    for (std::uint64_t c = lo_int; c <= hi_int && c >= lo_int; ++c) {
        if (is_prime_u64(c)) {
            found = c;
            if (policy == TransferConfig::NPolicy::Smallest) break;
        }
    }
    if (found == 0)
        throw no_prime_in_window("choose_modulus_N: no prime in [" + std::to_string(lo_int) +
                                 ", " + std::to_string(hi_int) + "]");
    // Needed by the wraparound argument: N >= n/W + 3, i.e. N*W >= n + 3W.
    if (found * W < n + 3 * W)
        throw no_prime_in_window("choose_modulus_N: window prime violates N >= n/W + 3");
    return found;
}

PrimeWeights build_weight_vector(const PrimeSubsetSpec& spec, std::uint64_t n, std::uint64_t W,
                                 std::uint64_t b, std::uint64_t N, double f_value, double kappa,
                                 const PrimeSieve& sieve) {
    const std::uint64_t x_hi = (2 * n) / 3;
    if (x_hi > sieve.limit())
        throw std::invalid_argument("build_weight_vector: sieve does not cover 2n/3");
    PrimeWeights out;
    out.a.N = N;
    out.a.values.assign(N, 0.0);
    const double phiW = static_cast<double>(euler_phi(factorize(W)));
    const double scale = phiW / (static_cast<double>(W) * static_cast<double>(N));
    KahanAcc mass;
    for (std::uint64_t x = 0; W * x + b <= x_hi; ++x) {
        const std::uint64_t p = W * x + b;
        if (p < 1 || !sieve.is_prime(p) || !spec_contains(spec, p, sieve)) continue;
        if (x >= N)
            throw internal_check_error("build_weight_vector: support exceeds Z_N");
        const double weight = scale * std::log(static_cast<double>(p));
        out.a.values[x] = weight;
        out.support.push_back(x);
        mass.add(weight);
    }
    out.alpha_prime = mass.value();
    out.alpha_prime_lower = 2.0 * (f_value + 3.0 * kappa) / (3.0 * (1.0 + 2.0 * kappa));
    if (f_value > 0.0) {
        out.lower_bound_ok = out.alpha_prime >= out.alpha_prime_lower * (1.0 - 1e-9);
        if (!out.lower_bound_ok)
            throw internal_check_error(
                "build_weight_vector: alpha' fell below 2(f+3k)/(3(1+2k))");
    }
    return out;
}

TripleSum triple_sum(const WeightVector& a1, const WeightVector& a2, const WeightVector& a3,
                     std::uint64_t m, unsigned threads) {
    const std::uint64_t N = a1.N;
    if (a2.N != N || a3.N != N) throw std::invalid_argument("triple_sum: mismatched moduli");
    m %= N;

    TripleSum out;
    {
        KahanAcc acc;
        for (std::uint64_t x = 0; x < N; ++x) {
            const double v1 = a1.values[x];
            if (v1 == 0.0) continue;
            // z = m - x - y (mod N), walked backwards as y increases.
            std::uint64_t z = (m + 2 * N - x) % N;
            for (std::uint64_t y = 0; y < N; ++y) {
                const double v2 = a2.values[y];
                if (v2 != 0.0) {
                    const double v3 = a3.values[z];
                    if (v3 != 0.0) acc.add(v1 * v2 * v3);
                }
                z = (z == 0) ? N - 1 : z - 1;
            }
        }
        out.direct = acc.value();
    }
    {
        const auto h1 = dft(a1.values, threads);
        const auto h2 = dft(a2.values, threads);
        const auto h3 = dft(a3.values, threads);
        KahanAcc acc;
        for (std::uint64_t r = 0; r < N; ++r) {
            const double ang = 2.0 * std::numbers::pi * static_cast<double>((m * r) % N) /
                               static_cast<double>(N);
            const cdouble e(std::cos(ang), std::sin(ang));
            acc.add((e * h1[r] * h2[r] * h3[r]).real());
        }
        out.spectral = acc.value() / static_cast<double>(N);
    }
    const double scale = std::max({std::abs(out.direct), std::abs(out.spectral), 1e-30});
    if (std::abs(out.direct - out.spectral) > 1e-8 * scale &&
        std::abs(out.direct - out.spectral) > 1e-14)
        throw internal_check_error("triple_sum: direct and spectral routes disagree: " +
                                   std::to_string(out.direct) + " vs " +
                                   std::to_string(out.spectral));
    return out;
}

SpectrumReport large_spectrum(const std::vector<cdouble>& a_hat, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("large_spectrum: delta must be positive");
    SpectrumReport rep;
    rep.delta = delta;
    KahanAcc tail, full;
    for (std::size_t r = 0; r < a_hat.size(); ++r) {
        const double mag = std::abs(a_hat[r]);
        const double m94 = std::pow(mag, 2.25);
        full.add(m94);
        if (mag >= delta)
            rep.frequencies.push_back(r);
        else
            tail.add(m94);
    }
    rep.moment94_tail = tail.value();
    rep.moment94_full = full.value();
    rep.size_bound_witness =
        static_cast<double>(rep.frequencies.size()) * std::pow(delta, 2.5);
    return rep;
}

ResidueSet bohr_set(const std::vector<std::uint64_t>& R, double eps, std::uint64_t N) {
    if (!(eps > 0.0) || !(eps < 0.5))
        throw std::invalid_argument("bohr_set: eps must lie in (0, 1/2)");
    std::vector<std::uint64_t> freqs;
    freqs.reserve(R.size());
    for (std::uint64_t r : R) freqs.push_back(r % N);
    std::sort(freqs.begin(), freqs.end());
    freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());

    const double eps_N = eps * static_cast<double>(N);
    ResidueSet B(N);
    for (std::uint64_t x = 0; x < N; ++x) {
        bool in = true;
        for (std::uint64_t r : freqs) {
            const std::uint64_t m = (x * r) % N;
            const std::uint64_t dist = std::min(m, N - m);
            if (static_cast<double>(dist) > eps_N) {
                in = false;
                break;
            }
        }
        if (in) B.insert(x);
    }
    const double lower = std::pow(eps, static_cast<double>(freqs.size())) *
                         static_cast<double>(N);
    if (static_cast<double>(B.size()) + 1e-9 < lower)
        throw internal_check_error("bohr_set: |B| = " + std::to_string(B.size()) +
                                   " below the classical bound eps^|R| N = " +
                                   std::to_string(lower));
    return B;
}

WeightVector smooth(const WeightVector& a, const ResidueSet& B, unsigned threads) {
    const std::uint64_t N = a.N;
    if (B.modulus() != N) throw std::invalid_argument("smooth: mismatched moduli");
    if (B.size() == 0) throw std::invalid_argument("smooth: B must be nonempty");

    const auto b_members = B.members();
    const double inv_B = 1.0 / static_cast<double>(B.size());
    auto convolve_beta = [&](const std::vector<double>& f) {
        std::vector<double> out(N, 0.0);
        for (std::uint64_t b : b_members) {
            // out[x] += f[x - b mod N] / |B|
            std::uint64_t src = (N - b) % N;
            for (std::uint64_t x = 0; x < N; ++x) {
                out[x] += f[src] * inv_B;
                ++src;
                if (src == N) src = 0;
            }
        }
        return out;
    };

    WeightVector result;
    result.N = N;
    result.values = convolve_beta(convolve_beta(a.values));

    // Independent spectral route: a' = idft(a~ * beta~^2).
    std::vector<double> beta(N, 0.0);
    for (std::uint64_t b : b_members) beta[b] = inv_B;
    const auto a_hat = dft(a.values, threads);
    const auto beta_hat = dft(beta, threads);
    std::vector<cdouble> prod(N);
    for (std::uint64_t r = 0; r < N; ++r) prod[r] = a_hat[r] * beta_hat[r] * beta_hat[r];
    const auto via_dft = idft(prod, threads);

    const double mass = a.total_mass();
    const double tol = 1e-9 * std::max(1.0, mass);
    for (std::uint64_t x = 0; x < N; ++x) {
        if (std::abs(via_dft[x].real() - result.values[x]) > tol)
            throw internal_check_error("smooth: convolution and DFT routes disagree at x=" +
                                       std::to_string(x));
    }

    const double mass_after = result.total_mass();
    if (std::abs(mass_after - mass) > 1e-10 * std::max(std::abs(mass), 1e-30))
        throw internal_check_error("smooth: mass not conserved: " + std::to_string(mass) +
                                   " -> " + std::to_string(mass_after));
    return result;
}

Lemma1Report lemma1_gap_report(const std::array<WeightVector, 3>& a,
                               const std::array<WeightVector, 3>& a_smooth,
                               std::uint64_t n_prime, double delta, double eps,
                               unsigned threads) {
    Lemma1Report rep;
    rep.triple_raw = triple_sum(a[0], a[1], a[2], n_prime, threads).direct;
    rep.triple_smoothed = triple_sum(a_smooth[0], a_smooth[1], a_smooth[2], n_prime,
                                     threads).direct;
    rep.gap = std::abs(rep.triple_smoothed - rep.triple_raw);
    rep.term_eps2_delta = eps * eps * std::pow(delta, -2.5);
    rep.term_delta14 = std::pow(delta, 0.25);
    const double denom = rep.term_eps2_delta + rep.term_delta14;
    rep.measured_C1 = rep.gap * static_cast<double>(a[0].N) / denom;
    return rep;
}

Lemma2Report lemma2_linf_check(const WeightVector& a_smooth, std::size_t spectrum_size,
                               double eps, std::uint64_t w, double C) {
    if (!(C > 0.0)) throw std::invalid_argument("lemma2_linf_check: C must be positive");
    Lemma2Report rep;
    rep.C = C;
    rep.max_value = *std::max_element(a_smooth.values.begin(), a_smooth.values.end());
    rep.bound = (1.0 + 2.0 / C) / static_cast<double>(a_smooth.N);
    rep.hypothesis_lhs = std::pow(eps, static_cast<double>(spectrum_size));
    rep.hypothesis_rhs =
        C * std::log(std::log(static_cast<double>(w))) / static_cast<double>(w);
    rep.hypothesis_holds = rep.hypothesis_lhs >= rep.hypothesis_rhs;
    rep.pass = rep.hypothesis_holds && rep.max_value <= rep.bound * (1.0 + 1e-12);
    return rep;
}

Lemma4Report lemma4_lower_bound(const std::array<WeightVector, 3>& a_smooth,
                                const std::array<double, 3>& alpha_prime, double kappa,
                                std::uint64_t n_prime, unsigned threads) {
    const std::uint64_t N = a_smooth[0].N;
    Lemma4Report rep;
    rep.hypothesis_met = true;
    for (int i = 0; i < 3; ++i) {
        if (alpha_prime[i] < kappa) {
            rep.hypothesis_met = false;
            rep.hypothesis_note = "alpha'_" + std::to_string(i + 1) + " < kappa";
        }
    }
    const double alpha_sum = alpha_prime[0] + alpha_prime[1] + alpha_prime[2];
    if (alpha_sum < 10.0 / 9.0 + 3.0 * kappa) {
        rep.hypothesis_met = false;
        rep.hypothesis_note = "alpha' sum < 10/9 + 3 kappa";
    }

    std::vector<ResidueSet> levels;
    for (int i = 0; i < 3; ++i) {
        rep.thresholds[i] = alpha_prime[i] * kappa / static_cast<double>(N);
        ResidueSet s(N);
        for (std::uint64_t x = 0; x < N; ++x)
            if (a_smooth[i].values[x] >= rep.thresholds[i]) s.insert(x);
        rep.level_sizes[i] = s.size();
        rep.size_lower_bounds[i] =
            alpha_prime[i] * (1.0 - kappa) / (1.0 + kappa) * static_cast<double>(N);
        rep.size_ok[i] = static_cast<double>(s.size()) >= rep.size_lower_bounds[i];
        levels.push_back(std::move(s));
    }
    rep.lemma3 = lemma3_verify(levels, n_prime);

    rep.smoothed_sum = triple_sum(a_smooth[0], a_smooth[1], a_smooth[2], n_prime,
                                  threads).direct;
    rep.bound_kappa9 = std::pow(kappa, 9) / (8.0 * static_cast<double>(N));
    rep.bound_kappa6 = std::pow(kappa, 6) * alpha_prime[0] * alpha_prime[1] * alpha_prime[2] /
                       (8.0 * static_cast<double>(N));
    rep.holds_kappa9 = rep.smoothed_sum >= rep.bound_kappa9;
    rep.holds_kappa6 = rep.smoothed_sum >= rep.bound_kappa6;
    return rep;
}

PipelineContext build_pipeline_context(std::uint64_t n,
                                       const std::array<PrimeSubsetSpec, 3>& specs,
                                       const TransferConfig& config, const PrimeSieve& sieve) {
    PipelineContext ctx;
    ctx.n = n;
    ctx.config = config;
    ctx.specs = specs;

    try {
        int overridden = 0;
        for (int i = 0; i < 3; ++i) {
            if (config.density_overrides[i]) {
                ctx.densities[i] = *config.density_overrides[i];
                ++overridden;
            } else {
                const auto prof =
                    relative_density_profile(specs[i], std::max<std::uint64_t>(2 * n / 3, 100),
                                             16, sieve);
                ctx.densities[i] = prof.empirical_lower;
            }
        }
        ctx.density_source = overridden == 3 ? "override" : overridden == 0 ? "measured" : "mixed";
    } catch (const std::exception& e) {
        throw pipeline_error("density", e.what());
    }

    try {
        const DerivedParameters params =
            derive_parameters(ctx.densities[0], ctx.densities[1], ctx.densities[2]);
        ctx.kappa_paper = params.kappa;
        ctx.kappa = config.kappa_override > 0.0 ? config.kappa_override : params.kappa;
        if (!(ctx.kappa > 0.0) || !(ctx.kappa < 1.0))
            throw std::invalid_argument("effective kappa must lie in (0,1)");
        const double denom = 1.0 + 2.0 * ctx.kappa;
        for (int i = 0; i < 3; ++i) ctx.alpha[i] = ctx.densities[i] / denom;
    } catch (const pipeline_error&) {
        throw;
    } catch (const std::exception& e) {
        throw pipeline_error("derive_parameters", e.what());
    }

    try {
        const WTrick wt = W_of(n, config.w_override);
        ctx.w = wt.w;
        ctx.W = wt.W;
    } catch (const std::exception& e) {
        throw pipeline_error("W_of", e.what());
    }

    std::array<std::vector<double>, 3> f_values;
    std::array<std::vector<double>, 3> f_raws;
    const UnitResidues unitsW = unit_residues(ctx.W);
    try {
        for (int i = 0; i < 3; ++i) {
            f_values[i].reserve(unitsW.residues.size());
            f_raws[i].reserve(unitsW.residues.size());
            for (std::uint64_t b : unitsW.residues) {
                const LocalDensity ld = local_density_f(specs[i], n, ctx.W, b, ctx.kappa, sieve);
                f_values[i].push_back(ld.value);
                f_raws[i].push_back(ld.raw);
            }
        }
    } catch (const std::exception& e) {
        throw pipeline_error("local_density", e.what());
    }

    try {
        const ResidueChoice choice =
            choose_residues(f_values[0], f_values[1], f_values[2], ctx.W, n);
        ctx.b = choice.b;
        ctx.f_clipped = choice.f_clipped;
        for (int i = 0; i < 3; ++i) {
            const auto it = std::lower_bound(unitsW.residues.begin(), unitsW.residues.end(),
                                             ctx.b[i]);
            ctx.f_raw[i] = f_raws[i][static_cast<std::size_t>(it - unitsW.residues.begin())];
        }
    } catch (const pipeline_error&) {
        throw;
    } catch (const std::exception& e) {
        throw pipeline_error("choose_residues", e.what());
    }

    try {
        ctx.N = choose_modulus_N(n, ctx.W, ctx.kappa, config.n_policy);
    } catch (const std::exception& e) {
        throw pipeline_error("choose_modulus", e.what());
    }

    try {
        const std::uint64_t b_sum = ctx.b[0] + ctx.b[1] + ctx.b[2];
        if (n < b_sum) throw std::invalid_argument("n smaller than b1+b2+b3");
        if ((n - b_sum) % ctx.W != 0)
            throw internal_check_error("n - (b1+b2+b3) not divisible by W");
        ctx.n_prime = (n - b_sum) / ctx.W;
        if (ctx.n_prime >= ctx.N)
            throw internal_check_error("n' >= N");
    } catch (const std::exception& e) {
        throw pipeline_error("n_prime", e.what());
    }

    try {
        for (int i = 0; i < 3; ++i) {
            ctx.weights[i] = build_weight_vector(specs[i], n, ctx.W, ctx.b[i], ctx.N,
                                                 ctx.f_clipped[i], ctx.kappa, sieve);
        }
    } catch (const std::exception& e) {
        throw pipeline_error("build_weights", e.what());
    }

    try {
        // No x_i in A_i may satisfy x1+x2+x3 = n' + N over the integers.
        const std::uint64_t target = ctx.n_prime + ctx.N;
        const auto& s1 = ctx.weights[0].support;
        const auto& s2 = ctx.weights[1].support;
        std::vector<char> in3(ctx.N, 0);
        for (std::uint64_t x : ctx.weights[2].support) in3[x] = 1;
        ctx.wraparound_free = true;
        for (std::uint64_t x1 : s1) {
            if (x1 > target) break;
            for (std::uint64_t x2 : s2) {
                if (x1 + x2 > target) break;
                const std::uint64_t x3 = target - x1 - x2;
                if (x3 < ctx.N && in3[x3]) {
                    ctx.wraparound_free = false;
                    break;
                }
            }
            if (!ctx.wraparound_free) break;
        }
    } catch (const std::exception& e) {
        throw pipeline_error("wraparound", e.what());
    }

    try {
        for (int i = 0; i < 3; ++i)
            ctx.a_hat[i] = dft(ctx.weights[i].a.values, config.threads);
    } catch (const std::exception& e) {
        throw pipeline_error("dft", e.what());
    }
    return ctx;
}

SpectralStage run_spectral_stage(const PipelineContext& ctx, double delta, double eps) {
    SpectralStage st;
    try {
        for (int i = 0; i < 3; ++i) st.spectra[i] = large_spectrum(ctx.a_hat[i], delta);
    } catch (const std::exception& e) {
        throw pipeline_error("large_spectrum", e.what());
    }
    try {
        for (int i = 0; i < 3; ++i)
            st.bohr.push_back(bohr_set(st.spectra[i].frequencies, eps, ctx.N));
    } catch (const std::exception& e) {
        throw pipeline_error("bohr_set", e.what());
    }
    try {
        for (int i = 0; i < 3; ++i)
            st.smoothed[i] = smooth(ctx.weights[i].a, st.bohr[i], ctx.config.threads);
    } catch (const std::exception& e) {
        throw pipeline_error("smooth", e.what());
    }
    try {
        const std::array<WeightVector, 3> raw = {ctx.weights[0].a, ctx.weights[1].a,
                                                 ctx.weights[2].a};
        st.lemma1 = lemma1_gap_report(raw, st.smoothed, ctx.n_prime, delta, eps,
                                      ctx.config.threads);
        const double C = ctx.config.C > 0.0 ? ctx.config.C : 2.0 / ctx.kappa;
        for (int i = 0; i < 3; ++i)
            st.lemma2[i] = lemma2_linf_check(st.smoothed[i], st.spectra[i].frequencies.size(),
                                             eps, ctx.w, C);
        const std::array<double, 3> alpha_prime = {ctx.weights[0].alpha_prime,
                                                   ctx.weights[1].alpha_prime,
                                                   ctx.weights[2].alpha_prime};
        st.lemma4 = lemma4_lower_bound(st.smoothed, alpha_prime, ctx.kappa, ctx.n_prime,
                                       ctx.config.threads);
    } catch (const pipeline_error&) {
        throw;
    } catch (const std::exception& e) {
        throw pipeline_error("lemma_reports", e.what());
    }
    return st;
}

TransferReport run_pipeline(std::uint64_t n, const std::array<PrimeSubsetSpec, 3>& specs,
                            const TransferConfig& config, const PrimeSieve& sieve) {
    if (n % 2 == 0) throw std::invalid_argument("run_pipeline: n must be odd");
    if (n > 10'000'000ULL) throw std::invalid_argument("run_pipeline: n capped at 1e7");

    const PipelineContext ctx = build_pipeline_context(n, specs, config, sieve);
    const SpectralStage st = run_spectral_stage(ctx, config.delta, config.epsilon);

    TransferReport rep;
    rep.n = n;
    rep.densities = ctx.densities;
    rep.density_source = ctx.density_source;
    rep.kappa_paper = ctx.kappa_paper;
    rep.kappa = ctx.kappa;
    rep.alpha = ctx.alpha;
    rep.w = ctx.w;
    rep.W = ctx.W;
    rep.b = ctx.b;
    rep.f_raw = ctx.f_raw;
    rep.f_clipped = ctx.f_clipped;
    rep.N = ctx.N;
    rep.n_policy =
        config.n_policy == TransferConfig::NPolicy::Smallest ? "smallest" : "largest";
    rep.n_prime = ctx.n_prime;
    for (int i = 0; i < 3; ++i) {
        rep.alpha_prime[i] = ctx.weights[i].alpha_prime;
        rep.alpha_prime_lower[i] = ctx.weights[i].alpha_prime_lower;
        rep.spectrum_sizes[i] = st.spectra[i].frequencies.size();
        rep.spectrum_moment94_tail[i] = st.spectra[i].moment94_tail;
        rep.spectrum_size_witness[i] = st.spectra[i].size_bound_witness;
        rep.bohr_sizes[i] = st.bohr[i].size();
        rep.bohr_lower_bounds[i] =
            std::pow(config.epsilon, static_cast<double>(st.spectra[i].frequencies.size())) *
            static_cast<double>(ctx.N);
    }
    rep.delta = config.delta;
    rep.epsilon = config.epsilon;
    rep.C = config.C > 0.0 ? config.C : 2.0 / ctx.kappa;
    rep.wraparound_free = ctx.wraparound_free;
    rep.lemma1 = st.lemma1;
    rep.lemma2 = st.lemma2;
    rep.lemma4 = st.lemma4;
    rep.triple_sum_raw = st.lemma1.triple_raw;
    rep.triple_sum_smoothed = st.lemma1.triple_smoothed;
    rep.final_lhs = static_cast<double>(ctx.N) * rep.triple_sum_raw;
    rep.final_rhs = std::pow(ctx.kappa, 9) / 9.0;
    rep.final_inequality = rep.final_lhs >= rep.final_rhs;

    // Direct witness search: n' in A1 + A2 + A3 over the integers, then the
    // lift p_i = W x_i + b_i.
    {
        const auto& s1 = ctx.weights[0].support;
        const auto& s2 = ctx.weights[1].support;
        std::vector<char> in3(ctx.N, 0);
        for (std::uint64_t x : ctx.weights[2].support) in3[x] = 1;
        for (std::uint64_t x1 : s1) {
            if (x1 > ctx.n_prime) break;
            for (std::uint64_t x2 : s2) {
                if (x1 + x2 > ctx.n_prime) break;
                const std::uint64_t x3 = ctx.n_prime - x1 - x2;
                if (x3 < ctx.N && in3[x3]) {
                    rep.witness_found = true;
                    rep.witness_x = {x1, x2, x3};
                    break;
                }
            }
            if (rep.witness_found) break;
        }
        if (rep.witness_found) {
            for (int i = 0; i < 3; ++i)
                rep.witness_primes[i] = ctx.W * rep.witness_x[i] + ctx.b[i];
            const std::uint64_t total =
                rep.witness_primes[0] + rep.witness_primes[1] + rep.witness_primes[2];
            if (total != n)
                throw internal_check_error("run_pipeline: witness lift does not sum to n");
            for (int i = 0; i < 3; ++i) {
                if (!sieve.is_prime(rep.witness_primes[i]) ||
                    !spec_contains(specs[i], rep.witness_primes[i], sieve))
                    throw internal_check_error("run_pipeline: witness prime not in P_i");
            }
        }
    }
    return rep;
}

nlohmann::json transfer_report_to_json(const TransferReport& rep) {
    nlohmann::json j;
    j["n"] = rep.n;
    j["densities"] = {jnum(rep.densities[0]), jnum(rep.densities[1]), jnum(rep.densities[2])};
    j["density_source"] = rep.density_source;
    j["kappa_paper"] = jnum(rep.kappa_paper);
    j["kappa"] = jnum(rep.kappa);
    j["alpha"] = {jnum(rep.alpha[0]), jnum(rep.alpha[1]), jnum(rep.alpha[2])};
    j["w"] = rep.w;
    j["W"] = rep.W;
    j["b"] = rep.b;
    j["f_raw"] = {jnum(rep.f_raw[0]), jnum(rep.f_raw[1]), jnum(rep.f_raw[2])};
    j["f_clipped"] = {jnum(rep.f_clipped[0]), jnum(rep.f_clipped[1]), jnum(rep.f_clipped[2])};
    j["N"] = rep.N;
    j["n_policy"] = rep.n_policy;
    j["n_prime"] = rep.n_prime;
    j["alpha_prime"] = {jnum(rep.alpha_prime[0]), jnum(rep.alpha_prime[1]),
                        jnum(rep.alpha_prime[2])};
    j["alpha_prime_lower"] = {jnum(rep.alpha_prime_lower[0]), jnum(rep.alpha_prime_lower[1]),
                              jnum(rep.alpha_prime_lower[2])};
    j["delta"] = jnum(rep.delta);
    j["epsilon"] = jnum(rep.epsilon);
    j["C"] = jnum(rep.C);
    j["spectrum_sizes"] = rep.spectrum_sizes;
    j["spectrum_moment94_tail"] = {jnum(rep.spectrum_moment94_tail[0]),
                                   jnum(rep.spectrum_moment94_tail[1]),
                                   jnum(rep.spectrum_moment94_tail[2])};
    j["spectrum_size_witness"] = {jnum(rep.spectrum_size_witness[0]),
                                  jnum(rep.spectrum_size_witness[1]),
                                  jnum(rep.spectrum_size_witness[2])};
    j["bohr_sizes"] = rep.bohr_sizes;
    j["bohr_lower_bounds"] = {jnum(rep.bohr_lower_bounds[0]), jnum(rep.bohr_lower_bounds[1]),
                              jnum(rep.bohr_lower_bounds[2])};
    j["wraparound_free"] = rep.wraparound_free;
    j["lemma1"] = {{"triple_raw", jnum(rep.lemma1.triple_raw)},
                   {"triple_smoothed", jnum(rep.lemma1.triple_smoothed)},
                   {"gap", jnum(rep.lemma1.gap)},
                   {"term_eps2_delta", jnum(rep.lemma1.term_eps2_delta)},
                   {"term_delta14", jnum(rep.lemma1.term_delta14)},
                   {"measured_C1", jnum(rep.lemma1.measured_C1)}};
    nlohmann::json l2 = nlohmann::json::array();
    for (const auto& r : rep.lemma2) {
        l2.push_back({{"max_value", jnum(r.max_value)},
                      {"bound", jnum(r.bound)},
                      {"C", jnum(r.C)},
                      {"hypothesis_lhs", jnum(r.hypothesis_lhs)},
                      {"hypothesis_rhs", jnum(r.hypothesis_rhs)},
                      {"hypothesis_holds", r.hypothesis_holds},
                      {"pass", r.pass}});
    }
    j["lemma2"] = std::move(l2);
    {
        const auto& l4 = rep.lemma4;
        nlohmann::json lem3;
        lem3["N"] = l4.lemma3.N;
        lem3["k"] = l4.lemma3.k;
        lem3["n"] = l4.lemma3.n;
        nlohmann::json thetas = nlohmann::json::array();
        for (const auto& th : l4.lemma3.theta_list) thetas.push_back(rational_to_string(th));
        lem3["theta_list"] = std::move(thetas);
        lem3["theta"] = rational_to_string(l4.lemma3.theta);
        lem3["bound"] = rational_to_string(l4.lemma3.bound);
        lem3["actual"] = l4.lemma3.actual;
        lem3["hypothesis_met"] = l4.lemma3.hypothesis_met;
        lem3["hypothesis_note"] = l4.lemma3.hypothesis_note;
        lem3["holds"] = l4.lemma3.holds;
        j["lemma4"] = {{"hypothesis_met", l4.hypothesis_met},
                       {"hypothesis_note", l4.hypothesis_note},
                       {"thresholds", {jnum(l4.thresholds[0]), jnum(l4.thresholds[1]),
                                       jnum(l4.thresholds[2])}},
                       {"level_sizes", l4.level_sizes},
                       {"size_lower_bounds",
                        {jnum(l4.size_lower_bounds[0]), jnum(l4.size_lower_bounds[1]),
                         jnum(l4.size_lower_bounds[2])}},
                       {"size_ok", {l4.size_ok[0], l4.size_ok[1], l4.size_ok[2]}},
                       {"lemma3", std::move(lem3)},
                       {"smoothed_sum", jnum(l4.smoothed_sum)},
                       {"bound_kappa9", jnum(l4.bound_kappa9)},
                       {"bound_kappa6", jnum(l4.bound_kappa6)},
                       {"holds_kappa9", l4.holds_kappa9},
                       {"holds_kappa6", l4.holds_kappa6}};
    }
    j["triple_sum_raw"] = jnum(rep.triple_sum_raw);
    j["triple_sum_smoothed"] = jnum(rep.triple_sum_smoothed);
    j["final_lhs"] = jnum(rep.final_lhs);
    j["final_rhs"] = jnum(rep.final_rhs);
    j["final_inequality"] = rep.final_inequality;
    j["witness_found"] = rep.witness_found;
    if (rep.witness_found) {
        j["witness_x"] = rep.witness_x;
        j["witness_primes"] = rep.witness_primes;
    } else {
        j["witness_x"] = nlohmann::json::array();
        j["witness_primes"] = nlohmann::json::array();
    }
    return j;
}

}  // namespace trisum
