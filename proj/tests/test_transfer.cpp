#include "trisum/transfer.hpp"

#include "trisum/errors.hpp"
#include "trisum/modular.hpp"
#include "trisum/random.hpp"

#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace trisum;

namespace {

const PrimeSieve& sieve_1e5() {
    static PrimeSieve s(100'000);
    return s;
}

WeightVector random_weights(std::uint64_t N, Rng& rng, double sparsity = 0.0) {
    WeightVector v;
    v.N = N;
    v.values.resize(N);
    for (auto& x : v.values) x = (rng.unit() < sparsity) ? 0.0 : rng.unit();
    return v;
}

std::array<PrimeSubsetSpec, 3> all_primes_specs() {
    return {PrimeSubsetSpec::all_primes(), PrimeSubsetSpec::all_primes(),
            PrimeSubsetSpec::all_primes()};
}

}  // namespace

TEST_CASE("derive_parameters formula and boundary") {
    const DerivedParameters p = derive_parameters(1.0, 1.0, 1.0);
    CHECK(p.kappa == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(p.alpha[0] == doctest::Approx(1.0 / 1.0002).epsilon(1e-12));
    const DerivedParameters q = derive_parameters(0.9, 0.9, 0.9);
    CHECK(q.kappa == doctest::Approx(0.7e-4).epsilon(1e-9));
    CHECK(q.alpha[1] == doctest::Approx(0.9 / (1.0 + 1.4e-4)).epsilon(1e-12));
    CHECK_THROWS_AS(derive_parameters(0.5, 0.5, 1.0), hypothesis_error);  // sum exactly 2
    CHECK_THROWS_AS(derive_parameters(0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("local_density_f: empty set, all primes, and a mod-5 class") {
    const PrimeSieve& s = sieve_1e5();
    const std::uint64_t n = 100'000, W = 30;
    const double kappa = 0.005;
    const auto empty = PrimeSubsetSpec::explicit_list({});
    const auto all = PrimeSubsetSpec::all_primes();
    const auto mod5 = PrimeSubsetSpec::residue_classes(5, {1});
    for (std::uint64_t b : unit_residues(W).residues) {
        CHECK(local_density_f(empty, n, W, b, kappa, s).value == 0.0);
        const LocalDensity f = local_density_f(all, n, W, b, kappa, s);
        CHECK(f.value > 0.8);
        CHECK(f.value < 1.1);
        const LocalDensity g = local_density_f(mod5, n, W, b, kappa, s);
        if (b % 5 == 1)
            CHECK(g.value > 0.5);
        else
            CHECK(g.value == 0.0);
    }
    CHECK_THROWS_AS(local_density_f(all, n, W, 6, kappa, s), std::invalid_argument);
}

TEST_CASE("choose_residues at W=6 with constant tables") {
    const std::vector<double> ones = {1.0, 1.0};  // Z_6^* = {1, 5}
    for (std::uint64_t n : {1ULL, 3ULL, 5ULL, 7ULL, 11ULL}) {
        const ResidueChoice c = choose_residues(ones, ones, ones, 6, n);
        CHECK((c.b[0] + c.b[1] + c.b[2]) % 6 == n % 6);
        CHECK(c.corollary_sum == Rational(3));
        for (double f : c.f_clipped) CHECK(f == 1.0);
    }
    // Even n cannot be b1+b2+b3 with all b odd.
    CHECK_THROWS_AS(choose_residues(ones, ones, ones, 6, 4), hypothesis_error);
}

TEST_CASE("choose_residues with realistic all-primes densities at W=30") {
    const PrimeSieve& s = sieve_1e5();
    const std::uint64_t n = 99'999, W = 30;
    std::vector<double> f;
    for (std::uint64_t b : unit_residues(W).residues)
        f.push_back(local_density_f(PrimeSubsetSpec::all_primes(), n, W, b, 0.005, s).value);
    const ResidueChoice c = choose_residues(f, f, f, W, n);
    CHECK((c.b[0] + c.b[1] + c.b[2]) % W == n % W);
    CHECK(3 * c.corollary_sum > 5);
    for (double v : c.f_clipped) CHECK(v > 0.0);
}

TEST_CASE("choose_modulus_N window examples") {
    CHECK(choose_modulus_N(99'999, 30, 0.005, TransferConfig::NPolicy::Smallest) == 3359);
    CHECK(choose_modulus_N(99'999, 30, 0.005, TransferConfig::NPolicy::Largest) == 3361);
    CHECK_THROWS_AS(choose_modulus_N(100'001, 6, 1e-4, TransferConfig::NPolicy::Smallest),
                    no_prime_in_window);
}

TEST_CASE("build_weight_vector: support, mass, and the alpha' lower bound") {
    const PrimeSieve& s = sieve_1e5();
    const std::uint64_t n = 99'999, W = 30, b = 7;
    const double kappa = 0.005;
    const std::uint64_t N = choose_modulus_N(n, W, kappa, TransferConfig::NPolicy::Smallest);
    const auto all = PrimeSubsetSpec::all_primes();
    const double f = local_density_f(all, n, W, b, kappa, s).value;
    const PrimeWeights pw = build_weight_vector(all, n, W, b, N, std::min(f, 1.0), kappa, s);
    CHECK(pw.alpha_prime > 0.6);
    CHECK(pw.alpha_prime < 0.72);
    CHECK(pw.lower_bound_ok);
    for (std::uint64_t x : pw.support) {
        const std::uint64_t p = W * x + b;
        CHECK(s.is_prime(p));
        CHECK(p <= 2 * n / 3);
        CHECK(pw.a.values[x] > 0.0);
    }
    const auto empty = PrimeSubsetSpec::explicit_list({});
    const PrimeWeights zero = build_weight_vector(empty, n, W, b, N, 0.0, kappa, s);
    CHECK(zero.alpha_prime == 0.0);
    CHECK(zero.support.empty());
}

TEST_CASE("dft of a point mass and of a constant") {
    const std::uint64_t N = 31;
    const WeightVector delta = WeightVector::delta_at(N, 0);
    const auto dh = dft(delta.values);
    for (std::uint64_t r = 0; r < N; ++r) {
        CHECK(std::abs(dh[r] - cdouble(1.0, 0.0)) < 1e-12);
    }
    std::vector<double> ones(N, 1.0);
    const auto oh = dft(ones);
    CHECK(std::abs(oh[0] - cdouble(static_cast<double>(N), 0.0)) < 1e-9);
    for (std::uint64_t r = 1; r < N; ++r) CHECK(std::abs(oh[r]) < 1e-9);
}

TEST_CASE("Parseval identity on random vectors") {
    Rng rng(1234);
    for (std::uint64_t N : {31ULL, 101ULL}) {
        for (int t = 0; t < 20; ++t) {
            const WeightVector f = random_weights(N, rng);
            const auto fh = dft(f.values);
            double lhs = 0.0, rhs = 0.0;
            for (std::uint64_t r = 0; r < N; ++r) lhs += std::norm(fh[r]);
            for (double v : f.values) rhs += v * v;
            rhs *= static_cast<double>(N);
            CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, rhs));
        }
    }
}

TEST_CASE("idft inverts dft") {
    Rng rng(777);
    const WeightVector f = random_weights(101, rng);
    const auto back = idft(dft(f.values));
    for (std::uint64_t x = 0; x < 101; ++x) {
        CHECK(std::abs(back[x].real() - f.values[x]) < 1e-11);
        CHECK(std::abs(back[x].imag()) < 1e-11);
    }
}

TEST_CASE("convolution theorem on random vectors") {
    Rng rng(4321);
    for (std::uint64_t N : {31ULL, 101ULL}) {
        for (int t = 0; t < 20; ++t) {
            const WeightVector a = random_weights(N, rng);
            const WeightVector b = random_weights(N, rng);
            const auto conv_hat = dft(cyclic_convolve(a.values, b.values));
            const auto ah = dft(a.values);
            const auto bh = dft(b.values);
            double mass_a = 0.0, mass_b = 0.0;
            for (double v : a.values) mass_a += v;
            for (double v : b.values) mass_b += v;
            const double scale = std::max(1.0, mass_a * mass_b);
            for (std::uint64_t r = 0; r < N; ++r)
                CHECK(std::abs(conv_hat[r] - ah[r] * bh[r]) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("triple_sum examples") {
    const std::uint64_t N = 31;
    const WeightVector u = WeightVector::uniform(N, 1.0);
    for (std::uint64_t m : {0ULL, 5ULL, 30ULL}) {
        const TripleSum ts = triple_sum(u, u, u, m);
        CHECK(ts.direct == doctest::Approx(1.0 / static_cast<double>(N)).epsilon(1e-10));
    }
    Rng rng(999);
    const WeightVector a3 = random_weights(N, rng);
    const WeightVector d0 = WeightVector::delta_at(N, 0);
    for (std::uint64_t m = 0; m < N; ++m) {
        const TripleSum ts = triple_sum(d0, d0, a3, m);
        CHECK(ts.direct == doctest::Approx(a3.values[m]).epsilon(1e-12));
    }
}

TEST_CASE("triple_sum dual-route agreement on random sparse vectors") {
    Rng rng(555);
    for (int t = 0; t < 25; ++t) {
        const std::uint64_t N = 101;
        const WeightVector a1 = random_weights(N, rng, 0.7);
        const WeightVector a2 = random_weights(N, rng, 0.7);
        const WeightVector a3 = random_weights(N, rng, 0.7);
        const TripleSum ts = triple_sum(a1, a2, a3, rng.below(N));
        const double scale = std::max({std::abs(ts.direct), std::abs(ts.spectral), 1e-30});
        CHECK(std::abs(ts.direct - ts.spectral) <= 1e-8 * scale);
    }
}

TEST_CASE("large_spectrum basics") {
    const std::uint64_t N = 101;
    const WeightVector u = WeightVector::uniform(N, 1.0);
    const auto uh = dft(u.values);
    const SpectrumReport top = large_spectrum(uh, 0.5);
    CHECK(top.frequencies == std::vector<std::uint64_t>{0});
    const SpectrumReport all = large_spectrum(uh, 1e-15);
    CHECK(all.frequencies.size() >= 1);
    CHECK_THROWS_AS(large_spectrum(uh, 0.0), std::invalid_argument);
    CHECK(top.size_bound_witness == doctest::Approx(std::pow(0.5, 2.5)));
}

TEST_CASE("bohr_set examples") {
    const ResidueSet b0 = bohr_set({0}, 0.1, 101);
    CHECK(b0.size() == 101);
    const ResidueSet b1 = bohr_set({1}, 0.1, 101);
    CHECK(b1.size() == 21);
    for (std::uint64_t x = 0; x <= 10; ++x) CHECK(b1.contains(x));
    for (std::uint64_t x = 91; x <= 100; ++x) CHECK(b1.contains(x));
    CHECK_FALSE(b1.contains(11));
    const ResidueSet vac = bohr_set({1, 5, 17}, 0.499, 101);
    CHECK(vac.size() == 101);  // constraint vacuous near 1/2
    const ResidueSet empty_R = bohr_set({}, 0.05, 101);
    CHECK(empty_R.size() == 101);
    CHECK_THROWS_AS(bohr_set({1}, 0.5, 101), std::invalid_argument);
    CHECK_THROWS_AS(bohr_set({1}, 0.0, 101), std::invalid_argument);
}

TEST_CASE("bohr_set classical lower bound on random spectra") {
    Rng rng(246);
    for (int t = 0; t < 50; ++t) {
        const std::uint64_t N = 1009;
        std::vector<std::uint64_t> R;
        const std::size_t size = 1 + rng.below(4);
        for (std::size_t i = 0; i < size; ++i) R.push_back(rng.below(N));
        const double eps = 0.05 + 0.4 * rng.unit();
        const ResidueSet B = bohr_set(R, eps, N);  // throws if the bound fails
        CHECK(B.contains(0));
    }
}

TEST_CASE("smooth: full group gives the uniform vector, {0} is the identity") {
    Rng rng(135);
    const std::uint64_t N = 101;
    const WeightVector a = random_weights(N, rng, 0.5);
    const double mass = a.total_mass();

    const WeightVector flat = smooth(a, ResidueSet::full(N));
    for (double v : flat.values)
        CHECK(v == doctest::Approx(mass / static_cast<double>(N)).epsilon(1e-9));

    ResidueSet zero_only(N);
    zero_only.insert(0);
    const WeightVector same = smooth(a, zero_only);
    for (std::uint64_t x = 0; x < N; ++x) CHECK(same.values[x] == a.values[x]);

    CHECK_THROWS_AS(smooth(a, ResidueSet(N)), std::invalid_argument);
}

TEST_CASE("smooth preserves mass and never raises the maximum") {
    Rng rng(975);
    const std::uint64_t N = 101;
    for (int t = 0; t < 10; ++t) {
        const WeightVector a = random_weights(N, rng, 0.3);
        const ResidueSet B = bohr_set({1 + rng.below(N - 1)}, 0.02 + 0.2 * rng.unit(), N);
        const WeightVector sm = smooth(a, B);
        CHECK(std::abs(sm.total_mass() - a.total_mass()) <=
              1e-10 * std::max(1e-30, a.total_mass()));
        const double max_a = *std::max_element(a.values.begin(), a.values.end());
        const double max_s = *std::max_element(sm.values.begin(), sm.values.end());
        CHECK(max_s <= max_a * (1.0 + 1e-12));
    }
}

TEST_CASE("lemma1 gap vanishes for uniform vectors and for B = {0}") {
    Rng rng(864);
    const std::uint64_t N = 101;
    const std::array<WeightVector, 3> u = {WeightVector::uniform(N, 0.7),
                                           WeightVector::uniform(N, 0.5),
                                           WeightVector::uniform(N, 0.9)};
    const ResidueSet B = bohr_set({3, 7}, 0.2, N);
    std::array<WeightVector, 3> us;
    for (int i = 0; i < 3; ++i) us[i] = smooth(u[i], B);
    const Lemma1Report flat = lemma1_gap_report(u, us, 17, 0.2, 0.05);
    CHECK(flat.gap <= 1e-12);

    const std::array<WeightVector, 3> a = {random_weights(N, rng, 0.5),
                                           random_weights(N, rng, 0.5),
                                           random_weights(N, rng, 0.5)};
    ResidueSet zero_only(N);
    zero_only.insert(0);
    std::array<WeightVector, 3> as;
    for (int i = 0; i < 3; ++i) as[i] = smooth(a[i], zero_only);
    const Lemma1Report same = lemma1_gap_report(a, as, 17, 0.2, 0.05);
    CHECK(same.gap == 0.0);
    CHECK(same.term_eps2_delta == doctest::Approx(0.05 * 0.05 * std::pow(0.2, -2.5)));
    CHECK(same.term_delta14 == doctest::Approx(std::pow(0.2, 0.25)));
}

TEST_CASE("lemma2 bound on already-uniform vectors") {
    const std::uint64_t N = 101;
    const WeightVector u = WeightVector::uniform(N, 1.0);
    const Lemma2Report rep = lemma2_linf_check(u, 1, 0.3, 5, 2.0);
    CHECK(rep.max_value == doctest::Approx(1.0 / static_cast<double>(N)));
    CHECK(rep.bound == doctest::Approx(2.0 / static_cast<double>(N)));
    if (rep.hypothesis_holds) CHECK(rep.pass);
}

TEST_CASE("lemma4 uniform case is exact") {
    const std::uint64_t N = 101;
    const double kappa = 0.01;
    const std::array<WeightVector, 3> a = {WeightVector::uniform(N, 0.5),
                                           WeightVector::uniform(N, 0.5),
                                           WeightVector::uniform(N, 0.5)};
    const Lemma4Report rep = lemma4_lower_bound(a, {0.5, 0.5, 0.5}, kappa, 9);
    CHECK(rep.hypothesis_met);
    CHECK(rep.level_sizes == std::array<std::uint64_t, 3>{N, N, N});
    CHECK(rep.smoothed_sum == doctest::Approx(1.0 / (8.0 * N)).epsilon(1e-9));
    CHECK(rep.holds_kappa9);
    CHECK(rep.holds_kappa6);
    CHECK(rep.lemma3.hypothesis_met);
    CHECK(rep.lemma3.holds);
}

TEST_CASE("lemma4 on synthetic dense supports, cross-checked with nu_count") {
    Rng rng(357);
    const std::uint64_t N = 101;
    std::array<WeightVector, 3> a;
    std::array<double, 3> alpha{};
    std::vector<ResidueSet> expected_levels;
    const double kappa = 0.01;
    for (int i = 0; i < 3; ++i) {
        ResidueSet support(N);
        while (support.size() < 70) support.insert(rng.below(N));
        a[i].N = N;
        a[i].values.assign(N, 0.0);
        alpha[i] = 0.6;
        for (std::uint64_t x : support.members()) a[i].values[x] = alpha[i] / 70.0;
        expected_levels.push_back(std::move(support));
    }
    const std::uint64_t n_prime = 40;
    const Lemma4Report rep = lemma4_lower_bound(a, alpha, kappa, n_prime);
    CHECK(rep.hypothesis_met);
    for (int i = 0; i < 3; ++i) {
        CHECK(rep.level_sizes[i] == 70);
        CHECK(rep.size_ok[i]);
    }
    CHECK(rep.lemma3.actual == nu_count(expected_levels, n_prime, NuMode::Enumerate));
    CHECK(rep.lemma3.hypothesis_met);
    CHECK(rep.lemma3.holds);
    CHECK(rep.holds_kappa9);
}

TEST_CASE("pipeline end-to-end at desk scale") {
    const PrimeSieve& s = sieve_1e5();
    TransferConfig cfg;
    cfg.kappa_override = 0.03;
    cfg.w_override = 5;
    const TransferReport rep = run_pipeline(10'001, all_primes_specs(), cfg, s);
    CHECK(rep.W == 30);
    CHECK(rep.N == 347);
    CHECK(rep.n_prime < rep.N);
    CHECK(rep.wraparound_free);
    CHECK(rep.witness_found);
    CHECK(rep.witness_primes[0] + rep.witness_primes[1] + rep.witness_primes[2] == 10'001);
    for (int i = 0; i < 3; ++i) {
        CHECK(s.is_prime(rep.witness_primes[i]));
        CHECK(rep.witness_primes[i] % rep.W == rep.b[i]);
        CHECK(rep.alpha_prime[i] > 0.0);
        CHECK(rep.spectrum_sizes[i] >= 1);
        CHECK(rep.bohr_sizes[i] >= 1);
    }
    CHECK(rep.kappa == 0.03);
    CHECK(rep.kappa_paper == doctest::Approx(1e-4).epsilon(1e-9));
    // Report invariants are recomputable from the stored numbers.
    CHECK(rep.final_lhs ==
          doctest::Approx(static_cast<double>(rep.N) * rep.triple_sum_raw));
    CHECK(rep.final_rhs == doctest::Approx(std::pow(rep.kappa, 9) / 9.0));
    const nlohmann::json j = transfer_report_to_json(rep);
    CHECK(j.at("witness_found").get<bool>());
    CHECK(j.at("N").get<std::uint64_t>() == 347);
}

TEST_CASE("pipeline on the sharpness family fails at choose_residues") {
    const PrimeSieve& s = sieve_1e5();
    TransferConfig cfg;
    cfg.kappa_override = 0.03;
    cfg.w_override = 5;
    cfg.density_overrides = {0.51, 0.51, 1.0};
    const std::array<PrimeSubsetSpec, 3> specs = {
        PrimeSubsetSpec::residue_classes(3, {1}), PrimeSubsetSpec::residue_classes(3, {1}),
        PrimeSubsetSpec::exclude(PrimeSubsetSpec::all_primes(), {3})};
    // 10001 == 5 (mod 6): no admissible residue triple exists.
    try {
        run_pipeline(10'001, specs, cfg, s);
        FAIL("expected pipeline_error");
    } catch (const pipeline_error& e) {
        CHECK(e.stage() == "choose_residues");
    }
}

TEST_CASE("pipeline degenerates gracefully on tiny n") {
    const PrimeSieve& s = sieve_1e5();
    TransferConfig cfg;
    CHECK_THROWS_AS(run_pipeline(29, all_primes_specs(), cfg, s), pipeline_error);
    CHECK_THROWS_AS(run_pipeline(100'000, all_primes_specs(), cfg, s),
                    std::invalid_argument);  // even n rejected up front
}

TEST_CASE("nested Bohr family: |B| grows with eps and smoothing max shrinks") {
    const PrimeSieve& s = sieve_1e5();
    TransferConfig cfg;
    cfg.kappa_override = 0.03;
    cfg.w_override = 5;
    const PipelineContext ctx = build_pipeline_context(10'001, all_primes_specs(), cfg, s);
    const SpectralStage base = run_spectral_stage(ctx, 0.2, 0.05);
    const auto R = base.spectra[0].frequencies;
    std::uint64_t prev_size = 0;
    double prev_max = std::numeric_limits<double>::infinity();
    for (double eps : {0.02, 0.05, 0.1, 0.2, 0.3}) {
        const ResidueSet B = bohr_set(R, eps, ctx.N);
        CHECK(B.size() >= prev_size);
        const WeightVector sm = smooth(ctx.weights[0].a, B);
        const double mx = *std::max_element(sm.values.begin(), sm.values.end());
        if (B.size() > prev_size) CHECK(mx <= prev_max * (1.0 + 1e-12));
        prev_size = B.size();
        prev_max = mx;
    }
}

TEST_CASE("sweep stage reuses the context across (delta, epsilon) pairs") {
    const PrimeSieve& s = sieve_1e5();
    TransferConfig cfg;
    cfg.kappa_override = 0.03;
    cfg.w_override = 5;
    const PipelineContext ctx = build_pipeline_context(10'001, all_primes_specs(), cfg, s);
    for (double delta : {0.1, 0.3}) {
        for (double eps : {0.02, 0.1}) {
            const SpectralStage st = run_spectral_stage(ctx, delta, eps);
            CHECK(st.lemma1.term_delta14 == doctest::Approx(std::pow(delta, 0.25)));
            CHECK(st.lemma1.gap >= 0.0);
            for (int i = 0; i < 3; ++i) CHECK(st.bohr[i].size() >= 1);
        }
    }
}
