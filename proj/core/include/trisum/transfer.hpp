#pragma once

#include "trisum/fourier.hpp"
#include "trisum/prime_sets.hpp"
#include "trisum/sumset.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace trisum {

// Configuration of one transference run.  kappa_override = 0 means "use the
// paper formula kappa"; C = 0 means "use 2/kappa".
struct TransferConfig {
    double kappa_override = 0.0;
    double delta = 0.2;
    double epsilon = 0.05;
    std::optional<std::uint64_t> w_override;
    double C = 0.0;
    enum class NPolicy { Smallest, Largest } n_policy = NPolicy::Smallest;
    std::array<std::optional<double>, 3> density_overrides{};
    unsigned threads = 1;
};

// Nonnegative weights on Z_N (N prime).
struct WeightVector {
    std::uint64_t N = 0;
    std::vector<double> values;

    double total_mass() const;
    static WeightVector uniform(std::uint64_t N, double mass);
    static WeightVector delta_at(std::uint64_t N, std::uint64_t x, double mass = 1.0);
};

struct DerivedParameters {
    double kappa = 0.0;
    std::array<double, 3> alpha{};
};

// kappa = 1e-4 (d1+d2+d3-2), alpha_i = d_i / (1+2 kappa).  Requires
// d1+d2+d3 > 2 and d_i in (0,1].
DerivedParameters derive_parameters(double d1, double d2, double d3);

// f(b) = max{0, (3 phi(W) / 2n) * sum_{x <= 2n/3, x == b (W)} 1_P(x) log x - 3 kappa}.
// May exceed 1 at desk scale; `exceeds_one` flags that.
struct LocalDensity {
    double raw = 0.0;       // before the max with 0
    double value = 0.0;     // after clipping at 0
    bool exceeds_one = false;
};

LocalDensity local_density_f(const PrimeSubsetSpec& spec, std::uint64_t n, std::uint64_t W,
                             std::uint64_t b, double kappa, const PrimeSieve& sieve);

// Picks (b1,b2,b3) in Z_W^* with b1+b2+b3 == n (mod W), f-sum > 5/3 and
// every f_i(b_i) > 0, via Corollary 1 (inputs clipped to [0,1] and
// rationalized exactly).
struct ResidueChoice {
    std::array<std::uint64_t, 3> b{};
    std::array<double, 3> f_clipped{};   // values the Corollary saw
    Rational corollary_sum;              // exact sum of the clipped values
};

ResidueChoice choose_residues(const std::vector<double>& f1, const std::vector<double>& f2,
                              const std::vector<double>& f3, std::uint64_t W, std::uint64_t n);

// Prime N in [(1+kappa) n/W, (1+2 kappa) n/W]; must satisfy N >= n/W + 3.
std::uint64_t choose_modulus_N(std::uint64_t n, std::uint64_t W, double kappa,
                               TransferConfig::NPolicy policy);

// a(x) = lambda_{b,W,N}(x) on A = {x : Wx+b in P cap [1, 2n/3]}, plus its
// mass alpha' and the support set.
struct PrimeWeights {
    WeightVector a;
    std::vector<std::uint64_t> support;  // A as sorted x values
    double alpha_prime = 0.0;
    double alpha_prime_lower = 0.0;      // 2 (f(b)+3 kappa) / (3 (1+2 kappa))
    bool lower_bound_ok = true;          // checked only when f(b) > 0
};

PrimeWeights build_weight_vector(const PrimeSubsetSpec& spec, std::uint64_t n, std::uint64_t W,
                                 std::uint64_t b, std::uint64_t N, double f_value, double kappa,
                                 const PrimeSieve& sieve);

// Direct and spectral evaluations of sum_{x+y+z=m} a1(x) a2(y) a3(z); both
// are computed, must agree to 1e-8 relative, and the direct value is
// returned.
struct TripleSum {
    double direct = 0.0;
    double spectral = 0.0;
};

TripleSum triple_sum(const WeightVector& a1, const WeightVector& a2, const WeightVector& a3,
                     std::uint64_t m, unsigned threads = 1);

// Large spectrum R = {r : |a~(r)| >= delta} with the tail 9/4-moment.
struct SpectrumReport {
    double delta = 0.0;
    std::vector<std::uint64_t> frequencies;
    double moment94_tail = 0.0;   // sum over r not in R of |a~(r)|^{9/4}
    double moment94_full = 0.0;   // over all r
    double size_bound_witness = 0.0;  // |R| * delta^{5/2}
};

SpectrumReport large_spectrum(const std::vector<cdouble>& a_hat, double delta);

// B = {x : ||x r / N|| <= eps for all r in R}; asserts |B| >= eps^{|R|} N.
ResidueSet bohr_set(const std::vector<std::uint64_t>& R, double eps, std::uint64_t N);

// a' = a * beta * beta with beta = 1_B / |B|; dual-route (direct and DFT)
// with mass preserved to 1e-10 relative.
WeightVector smooth(const WeightVector& a, const ResidueSet& B, unsigned threads = 1);

struct Lemma1Report {
    double triple_raw = 0.0;       // direct value at n'
    double triple_smoothed = 0.0;
    double gap = 0.0;
    double term_eps2_delta = 0.0;  // eps^2 delta^{-5/2}
    double term_delta14 = 0.0;     // delta^{1/4}
    double measured_C1 = 0.0;      // gap * N / (sum of the terms)
};

Lemma1Report lemma1_gap_report(const std::array<WeightVector, 3>& a,
                               const std::array<WeightVector, 3>& a_smooth, std::uint64_t n_prime,
                               double delta, double eps, unsigned threads = 1);

struct Lemma2Report {
    double max_value = 0.0;
    double bound = 0.0;            // (1 + 2/C) / N
    double C = 0.0;
    double hypothesis_lhs = 0.0;   // eps^{|R|}
    double hypothesis_rhs = 0.0;   // C log log w / w
    bool hypothesis_holds = false;
    bool pass = false;             // judged only when the hypothesis holds
};

Lemma2Report lemma2_linf_check(const WeightVector& a_smooth, std::size_t spectrum_size,
                               double eps, std::uint64_t w, double C);

struct Lemma4Report {
    bool hypothesis_met = false;
    std::string hypothesis_note;
    std::array<double, 3> thresholds{};         // alpha_i' kappa / N
    std::array<std::uint64_t, 3> level_sizes{}; // |A_i'|
    std::array<double, 3> size_lower_bounds{};  // alpha_i'(1-kappa)N/(1+kappa)
    std::array<bool, 3> size_ok{};
    Lemma3Report lemma3;
    double smoothed_sum = 0.0;                  // direct triple sum of a'
    double bound_kappa9 = 0.0;                  // kappa^9 / (8N)
    double bound_kappa6 = 0.0;                  // kappa^6 alpha1' alpha2' alpha3' / (8N)
    bool holds_kappa9 = false;
    bool holds_kappa6 = false;
};

Lemma4Report lemma4_lower_bound(const std::array<WeightVector, 3>& a_smooth,
                                const std::array<double, 3>& alpha_prime, double kappa,
                                std::uint64_t n_prime, unsigned threads = 1);

// Stage outputs of one full run.
struct TransferReport {
    std::uint64_t n = 0;
    std::array<double, 3> densities{};
    std::string density_source;  // "measured" or "override"
    double kappa_paper = 0.0;
    double kappa = 0.0;  // effective
    std::array<double, 3> alpha{};
    std::uint64_t w = 0;
    std::uint64_t W = 0;
    std::array<std::uint64_t, 3> b{};
    std::array<double, 3> f_raw{};
    std::array<double, 3> f_clipped{};
    std::uint64_t N = 0;
    std::string n_policy;
    std::uint64_t n_prime = 0;
    std::array<double, 3> alpha_prime{};
    std::array<double, 3> alpha_prime_lower{};
    double delta = 0.0;
    double epsilon = 0.0;
    double C = 0.0;
    std::array<std::size_t, 3> spectrum_sizes{};
    std::array<double, 3> spectrum_moment94_tail{};
    std::array<double, 3> spectrum_size_witness{};
    std::array<std::uint64_t, 3> bohr_sizes{};
    std::array<double, 3> bohr_lower_bounds{};
    bool wraparound_free = false;
    Lemma1Report lemma1;
    std::array<Lemma2Report, 3> lemma2{};
    Lemma4Report lemma4;
    double triple_sum_raw = 0.0;
    double triple_sum_smoothed = 0.0;
    double final_lhs = 0.0;          // N * triple_sum_raw
    double final_rhs = 0.0;          // kappa^9 / 9
    bool final_inequality = false;   // reported, never gating
    bool witness_found = false;
    std::array<std::uint64_t, 3> witness_x{};
    std::array<std::uint64_t, 3> witness_primes{};
};

nlohmann::json transfer_report_to_json(const TransferReport& rep);

// Heavy stage-1 artifacts, reusable across (delta, epsilon) sweeps.
struct PipelineContext {
    std::uint64_t n = 0;
    TransferConfig config;
    std::array<PrimeSubsetSpec, 3> specs;
    std::array<double, 3> densities{};
    std::string density_source;
    double kappa_paper = 0.0;
    double kappa = 0.0;
    std::array<double, 3> alpha{};
    std::uint64_t w = 0;
    std::uint64_t W = 0;
    std::array<std::uint64_t, 3> b{};
    std::array<double, 3> f_raw{};
    std::array<double, 3> f_clipped{};
    std::uint64_t N = 0;
    std::uint64_t n_prime = 0;
    std::array<PrimeWeights, 3> weights;
    std::array<std::vector<cdouble>, 3> a_hat;
    bool wraparound_free = false;
};

// Runs every stage up to the DFTs.  Throws pipeline_error with the failing
// stage name.
PipelineContext build_pipeline_context(std::uint64_t n,
                                       const std::array<PrimeSubsetSpec, 3>& specs,
                                       const TransferConfig& config, const PrimeSieve& sieve);

// Spectral tail of the pipeline for one (delta, epsilon) pair.
struct SpectralStage {
    std::array<SpectrumReport, 3> spectra;
    std::vector<ResidueSet> bohr;  // one per weight vector
    std::array<WeightVector, 3> smoothed;
    Lemma1Report lemma1;
    std::array<Lemma2Report, 3> lemma2;
    Lemma4Report lemma4;
};

SpectralStage run_spectral_stage(const PipelineContext& ctx, double delta, double eps);

TransferReport run_pipeline(std::uint64_t n, const std::array<PrimeSubsetSpec, 3>& specs,
                            const TransferConfig& config, const PrimeSieve& sieve);

}  // namespace trisum
