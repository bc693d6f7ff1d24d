#include "commands.hpp"

#include "trisum/errors.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iostream>

using namespace trisum;
using namespace trisum::cli;

namespace {

void add_common(CLI::App* sub, CommonOptions& common) {
    sub->add_option("--seed", common.seed, "RNG seed");
    sub->add_option("--out", common.out, "output path (default stdout)");
    sub->add_option("--format", common.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", common.threads, "worker threads for heavy loops");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trisum: additive verification over Z_q^*, sumset bounds, prime triple "
                 "representations, and the density transference pipeline"};
    app.require_subcommand(1);

    CommonOptions common;
    std::function<int()> run;

    // verify-addition
    {
        auto* sub = app.add_subcommand("verify-addition",
                                       "randomized exact verification of the addition theorem "
                                       "and its corollary");
        auto opt = std::make_shared<VerifyAdditionOptions>();
        sub->add_option("--q-max", opt->q_max, "largest modulus to cover");
        sub->add_option("--trials", opt->trials, "random tables per (q, n)");
        sub->add_option("--oracle-max", opt->oracle_max,
                        "cross-check against the brute-force oracle up to this q");
        add_common(sub, common);
        sub->callback([&, opt] { run = [&, opt] { return cmd_verify_addition(common, *opt); }; });
    }

    // verify-sumset
    {
        auto* sub = app.add_subcommand("verify-sumset",
                                       "Pollard inequality and sumset lower-bound campaigns");
        auto opt = std::make_shared<VerifySumsetOptions>();
        sub->add_option("--pollard-exhaustive-max", opt->pollard_exhaustive_max,
                        "run every subset pair for N in {5,7,11} up to this N");
        sub->add_option("--pollard-random", opt->pollard_random, "random (A,B,t) instances");
        sub->add_option("--lemma3-instances", opt->lemma3_instances,
                        "random instances meeting the lower-bound hypotheses");
        add_common(sub, common);
        sub->callback([&, opt] { run = [&, opt] { return cmd_verify_sumset(common, *opt); }; });
    }

    // pollard-check
    {
        auto* sub = app.add_subcommand("pollard-check", "level-set inequality on given or "
                                                        "random subsets of Z_N");
        auto opt = std::make_shared<PollardCheckOptions>();
        auto a_csv = std::make_shared<std::string>();
        auto b_csv = std::make_shared<std::string>();
        sub->add_option("--N", opt->N, "prime modulus");
        sub->add_option("--a", *a_csv, "comma-separated members of A");
        sub->add_option("--b", *b_csv, "comma-separated members of B");
        sub->add_option("--t", opt->t, "level (0 = all admissible)");
        sub->add_option("--trials", opt->trials, "random pairs when no explicit sets");
        add_common(sub, common);
        sub->callback([&, opt, a_csv, b_csv] {
            run = [&, opt, a_csv, b_csv] {
                auto o = *opt;
                std::stringstream sa(*a_csv), sb(*b_csv);
                std::string tok;
                while (std::getline(sa, tok, ','))
                    if (!tok.empty()) o.a.push_back(std::stoull(tok));
                while (std::getline(sb, tok, ','))
                    if (!tok.empty()) o.b.push_back(std::stoull(tok));
                return cmd_pollard_check(common, o);
            };
        });
    }

    // lemma3-verify
    {
        auto* sub = app.add_subcommand("lemma3-verify",
                                       "Varnavides-type sumset lower bound on random sets");
        auto opt = std::make_shared<Lemma3VerifyOptions>();
        auto sizes_csv = std::make_shared<std::string>();
        auto n_flag = std::make_shared<std::int64_t>(-1);
        sub->add_option("--N", opt->N, "prime modulus");
        sub->add_option("--sizes", *sizes_csv, "comma-separated set sizes (k entries)");
        sub->add_option("--n", *n_flag, "target residue (default random)");
        sub->add_option("--trials", opt->trials, "instances");
        add_common(sub, common);
        sub->callback([&, opt, sizes_csv, n_flag] {
            run = [&, opt, sizes_csv, n_flag] {
                auto o = *opt;
                if (!sizes_csv->empty()) {
                    o.sizes.clear();
                    std::stringstream ss(*sizes_csv);
                    std::string tok;
                    while (std::getline(ss, tok, ','))
                        if (!tok.empty()) o.sizes.push_back(std::stoull(tok));
                }
                if (*n_flag >= 0) o.n = static_cast<std::uint64_t>(*n_flag);
                return cmd_lemma3_verify(common, o);
            };
        });
    }

    // density-goldbach
    {
        auto* sub = app.add_subcommand("density-goldbach",
                                       "per-n representation survey over prime subsets (CSV)");
        auto opt = std::make_shared<DensityGoldbachOptions>();
        sub->add_option("--spec1", opt->spec1, "spec file or all-primes")->required();
        sub->add_option("--spec2", opt->spec2, "spec file or all-primes")->required();
        sub->add_option("--spec3", opt->spec3, "spec file or all-primes")->required();
        sub->add_option("--n-lo", opt->n_lo, "range start");
        sub->add_option("--n-hi", opt->n_hi, "range end");
        add_common(sub, common);
        sub->callback([&, opt] { run = [&, opt] { return cmd_density_goldbach(common, *opt); }; });
    }

    // transfer
    {
        auto* sub = app.add_subcommand("transfer", "run the transference pipeline on one n");
        auto opt = std::make_shared<TransferOptions>();
        sub->add_option("--n", opt->n, "odd target integer")->required();
        sub->add_option("--spec1", opt->spec1, "spec file or all-primes");
        sub->add_option("--spec2", opt->spec2, "spec file or all-primes");
        sub->add_option("--spec3", opt->spec3, "spec file or all-primes");
        sub->add_option("--kappa", opt->kappa, "effective kappa (0 = paper formula)");
        sub->add_option("--delta", opt->delta, "large-spectrum threshold");
        sub->add_option("--epsilon", opt->epsilon, "Bohr set radius");
        sub->add_option("--w", opt->w, "w override (0 = default w(n))");
        sub->add_option("--C", opt->C, "smoothing bound constant (0 = 2/kappa)");
        sub->add_option("--n-policy", opt->n_policy, "smallest|largest prime in the window");
        sub->add_option("--d1", opt->d1, "density override for P1 (<0 = measured)");
        sub->add_option("--d2", opt->d2, "density override for P2 (<0 = measured)");
        sub->add_option("--d3", opt->d3, "density override for P3 (<0 = measured)");
        sub->add_option("--grid", opt->grid,
                        "sweep \"d1,d2,..xE1,E2,..\" over (delta,epsilon); emits CSV");
        add_common(sub, common);
        sub->callback([&, opt] { run = [&, opt] { return cmd_transfer(common, *opt); }; });
    }

    // counterexample
    {
        auto* sub = app.add_subcommand("counterexample",
                                       "verified sharpness constructions (binary | blocks)");
        auto opt = std::make_shared<CounterexampleOptions>();
        sub->add_option("--kind", opt->kind, "binary|blocks")->required();
        sub->add_option("--w", opt->w, "binary: small-prime cutoff");
        sub->add_option("--x-max", opt->x_max, "binary: verify targets up to this bound");
        sub->add_option("--x-density", opt->x_density, "binary: density measurement point");
        sub->add_option("--schedule", opt->schedule, "blocks: explicit N_1,N_2,...");
        sub->add_option("--paper-kmax", opt->paper_kmax, "blocks: paper growth schedule length");
        sub->add_option("--geometric", opt->geometric, "blocks: base,ratio,count");
        add_common(sub, common);
        sub->callback([&, opt] { run = [&, opt] { return cmd_counterexample(common, *opt); }; });
    }

    // vinogradov-ratio
    {
        auto* sub = app.add_subcommand("vinogradov-ratio",
                                       "weighted triple counts against the main-term prediction");
        auto opt = std::make_shared<VinogradovRatioOptions>();
        sub->add_option("--n-lo", opt->n_lo, "sample range start");
        sub->add_option("--n-hi", opt->n_hi, "sample range end");
        sub->add_option("--samples", opt->samples, "number of odd samples");
        sub->add_option("--cutoff", opt->cutoff, "singular series truncation");
        add_common(sub, common);
        sub->callback([&, opt] { run = [&, opt] { return cmd_vinogradov_ratio(common, *opt); }; });
    }

    // density-profile
    {
        auto* sub = app.add_subcommand("density-profile",
                                       "relative density of a prime subset on a geometric grid");
        auto opt = std::make_shared<DensityProfileOptions>();
        sub->add_option("--spec", opt->spec, "spec file or all-primes")->required();
        sub->add_option("--x-max", opt->x_max, "grid endpoint");
        sub->add_option("--grid-size", opt->grid_size, "grid points");
        add_common(sub, common);
        sub->callback([&, opt] { run = [&, opt] { return cmd_density_profile(common, *opt); }; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kUsage;
    }

    const auto t0 = std::chrono::steady_clock::now();
    int status = kUsage;
    try {
        status = run();
    } catch (const internal_check_error& e) {
        std::cerr << "internal consistency violation: " << e.what() << "\n";
        return kViolation;
    } catch (const pipeline_error& e) {
        std::cerr << "pipeline failed at stage " << e.stage() << ": " << e.what() << "\n";
        return kUsage;
    } catch (const hypothesis_error& e) {
        std::cerr << "hypothesis not satisfied: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::cerr << "duration_ms " << ms << "\n";
    return status;
}
