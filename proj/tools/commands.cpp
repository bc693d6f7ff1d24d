#include "commands.hpp"

#include "trisum/addition.hpp"
#include "trisum/errors.hpp"
#include "trisum/format.hpp"
#include "trisum/modular.hpp"
#include "trisum/prime_sets.hpp"
#include "trisum/random.hpp"
#include "trisum/sieve.hpp"
#include "trisum/sumset.hpp"
#include "trisum/transfer.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace trisum::cli {

namespace {

using nlohmann::json;

json jnum(double x) { return round_sig12(x); }

PrimeSieve make_sieve(std::uint64_t limit) {
    return PrimeSieve(std::max<std::uint64_t>(limit, 100));
}

PrimeSubsetSpec load_spec(const std::string& arg) {
    if (arg == "all-primes" || arg.empty()) return PrimeSubsetSpec::all_primes();
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open spec file: " + arg);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("spec file " + arg + " is not valid JSON: " + e.what());
    }
    try {
        return j.get<PrimeSubsetSpec>();
    } catch (const json::exception& e) {
        throw std::invalid_argument("spec file " + arg + " is malformed: " + e.what());
    }
}

std::vector<std::uint64_t> parse_u64_list(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoull(tok));
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

UnitFunction random_signed_table(std::uint64_t q, Rng& rng) {
    const auto dom = unit_residues(q);
    std::vector<Rational> vals;
    vals.reserve(dom.residues.size());
    for (std::size_t i = 0; i < dom.residues.size(); ++i)
        vals.push_back(make_rational(rng.range(-50, 50), rng.range(1, 20)));
    return UnitFunction(q, std::move(vals));
}

UnitFunction random_01_table(std::uint64_t q, Rng& rng, std::int64_t k_lo) {
    const auto dom = unit_residues(q);
    std::vector<Rational> vals;
    vals.reserve(dom.residues.size());
    for (std::size_t i = 0; i < dom.residues.size(); ++i)
        vals.push_back(make_rational(rng.range(k_lo, 64), 64));
    return UnitFunction(q, std::move(vals));
}

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

}  // namespace

json make_manifest(const std::string& subcommand, const json& parameters, std::uint64_t seed,
                   const std::string& outcome) {
    json m;
    m["subcommand"] = subcommand;
    m["parameters"] = parameters;
    m["seed"] = seed;
    m["version"] = kVersion;
    m["outcome"] = outcome;
    return m;
}

void emit_output(const CommonOptions& common, const std::string& payload) {
    if (common.out.empty()) {
        std::cout << payload;
        if (payload.empty() || payload.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(common.out, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + common.out);
    out << payload;
    if (payload.empty() || payload.back() != '\n') out << '\n';
}

int cmd_verify_addition(const CommonOptions& common, const VerifyAdditionOptions& opt) {
    if (opt.q_max == 0 || opt.q_max > 10'000)
        throw std::invalid_argument("verify-addition: q_max must lie in [1, 10^4]");
    if (opt.trials == 0) throw std::invalid_argument("verify-addition: trials must be positive");

    Rng rng(common.seed);
    json violations = json::array();
    std::uint64_t theorem2_checks = 0, corollary_checks = 0;

    for (std::uint64_t q = 1; q <= opt.q_max; ++q) {
        if (gcd_u64(q, 6) == 1) {
            for (std::uint64_t trial = 0; trial < opt.trials; ++trial) {
                const UnitFunction f1 = random_signed_table(q, rng);
                const UnitFunction f2 = random_signed_table(q, rng);
                const UnitFunction f3 = random_signed_table(q, rng);
                const Rational K = mean_K(f1, f2, f3);
                const std::uint64_t n = q == 1 ? 0 : trial % q;
                try {
                    const UnitTriple t = solve_theorem2(q, f1, f2, f3, n);
                    ++theorem2_checks;
                    bool ok = (t.x + t.y + t.z) % q == n % q && t.achieved_sum >= K &&
                              f1.is_unit(t.x) && f2.is_unit(t.y) && f3.is_unit(t.z);
                    if (q <= opt.oracle_max) {
                        const auto best = oracle_best_triple(q, f1, f2, f3, n);
                        ok = ok && best.has_value() && best->achieved_sum >= t.achieved_sum &&
                             best->achieved_sum >= K;
                    }
                    if (!ok) violations.push_back({{"kind", "theorem2"}, {"q", q}, {"n", n}});
                } catch (const internal_check_error& e) {
                    violations.push_back(
                        {{"kind", "theorem2"}, {"q", q}, {"n", n}, {"error", e.what()}});
                }
            }
        }

        // Corollary 1 shapes: squarefree odd, or 2 * (squarefree odd).
        const Modulus m = factorize(q);
        bool admissible = true;
        for (const auto& [p, e] : m.factorization)
            if (e > 1) admissible = false;
        if (!admissible || (q % 2 == 0 && (q / 2) % 2 == 0)) continue;
        const std::uint64_t phi = euler_phi(m);
        std::uint64_t done = 0, attempts = 0;
        while (done < opt.trials && attempts < 40 * opt.trials) {
            ++attempts;
            const UnitFunction f1 = random_01_table(q, rng, 40);
            const UnitFunction f2 = random_01_table(q, rng, 40);
            const UnitFunction f3 = random_01_table(q, rng, 40);
            if (f1.total() + f2.total() + f3.total() <= Rational(2) * Rational(phi)) continue;
            std::uint64_t n = rng.below(q);
            if (q % 2 == 0) n |= 1;  // even q reaches only odd n
            try {
                const UnitTriple t = solve_corollary1(q, f1, f2, f3, n);
                ++corollary_checks;
                ++done;
                const bool ok = (t.x + t.y + t.z) % q == n % q && 3 * t.achieved_sum > 5 &&
                                f1(t.x) != 0 && f2(t.y) != 0 && f3(t.z) != 0;
                if (!ok) violations.push_back({{"kind", "corollary1"}, {"q", q}, {"n", n}});
            } catch (const internal_check_error& e) {
                violations.push_back(
                    {{"kind", "corollary1"}, {"q", q}, {"n", n}, {"error", e.what()}});
                ++done;
            }
        }
    }

    json params = {{"q_max", opt.q_max}, {"trials", opt.trials}, {"oracle_max", opt.oracle_max}};
    json doc;
    doc["manifest"] = make_manifest("verify-addition", params, common.seed,
                                    violations.empty() ? "ok" : "violations");
    doc["theorem2_checks"] = theorem2_checks;
    doc["corollary_checks"] = corollary_checks;
    doc["violations"] = violations;
    emit_output(common, doc.dump(2));
    return violations.empty() ? kOk : kViolation;
}

int cmd_verify_sumset(const CommonOptions& common, const VerifySumsetOptions& opt) {
    Rng rng(common.seed);
    json violations = json::array();
    std::uint64_t pollard_checks = 0, lemma3_checks = 0;

    // Exhaustive Pollard over every nonempty (A, B) for small prime N.
    for (std::uint64_t N : {5ULL, 7ULL, 11ULL}) {
        if (N > opt.pollard_exhaustive_max) break;
        for (std::uint64_t abits = 1; abits < (1ULL << N); ++abits) {
            ResidueSet A(N);
            for (std::uint64_t x = 0; x < N; ++x)
                if ((abits >> x) & 1) A.insert(x);
            for (std::uint64_t bbits = 1; bbits < (1ULL << N); ++bbits) {
                ResidueSet B(N);
                for (std::uint64_t x = 0; x < N; ++x)
                    if ((bbits >> x) & 1) B.insert(x);
                const std::uint64_t t_max = std::min(A.size(), B.size());
                for (std::uint64_t t = 1; t <= t_max; ++t) {
                    ++pollard_checks;
                    if (!pollard_check(A, B, t).holds)
                        violations.push_back({{"kind", "pollard"},
                                              {"N", N},
                                              {"a_bits", abits},
                                              {"b_bits", bbits},
                                              {"t", t}});
                }
            }
        }
    }

    // Randomized Pollard across the primes in [13, 101].
    std::vector<std::uint64_t> moduli;
    for (std::uint64_t N = 13; N <= 101; ++N)
        if (is_prime_u64(N)) moduli.push_back(N);
    for (std::uint64_t i = 0; i < opt.pollard_random; ++i) {
        const std::uint64_t N = moduli[rng.below(moduli.size())];
        ResidueSet A = random_subset(N, 1 + rng.below(N), rng);
        ResidueSet B = random_subset(N, 1 + rng.below(N), rng);
        const std::uint64_t t = 1 + rng.below(std::min(A.size(), B.size()));
        ++pollard_checks;
        if (!pollard_check(A, B, t).holds)
            violations.push_back({{"kind", "pollard_random"}, {"N", N}, {"t", t}, {"i", i}});
    }

    // Randomized Lemma 3 instances that meet the hypotheses.
    const std::vector<std::uint64_t> hi_primes = {79, 83, 89, 97, 101};
    std::uint64_t made = 0;
    while (made < opt.lemma3_instances) {
        const std::size_t k = 2 + rng.below(3);
        std::uint64_t N;
        std::vector<ResidueSet> sets;
        if (k == 2) {
            N = 53;
            for (std::size_t i = 0; i < k; ++i)
                sets.push_back(random_subset(N, 34 + rng.below(18), rng));
        } else if (k == 3) {
            N = hi_primes[rng.below(hi_primes.size())];
            for (std::size_t i = 0; i < k; ++i)
                sets.push_back(random_subset(N, (N * 11) / 20 + rng.below(N / 4), rng));
        } else {
            N = 31;
            for (std::size_t i = 0; i < k; ++i)
                sets.push_back(random_subset(N, (N * 17) / 20 + rng.below(N / 8 + 1), rng));
        }
        const Lemma3Report rep = lemma3_verify(sets, rng.below(N));
        if (!rep.hypothesis_met) continue;
        ++made;
        ++lemma3_checks;
        if (!rep.holds)
            violations.push_back({{"kind", "lemma3"}, {"N", N}, {"k", k}, {"n", rep.n}});
    }

    json params = {{"pollard_exhaustive_max", opt.pollard_exhaustive_max},
                   {"pollard_random", opt.pollard_random},
                   {"lemma3_instances", opt.lemma3_instances}};
    json doc;
    doc["manifest"] = make_manifest("verify-sumset", params, common.seed,
                                    violations.empty() ? "ok" : "violations");
    doc["pollard_checks"] = pollard_checks;
    doc["lemma3_checks"] = lemma3_checks;
    doc["violations"] = violations;
    emit_output(common, doc.dump(2));
    return violations.empty() ? kOk : kViolation;
}

int cmd_pollard_check(const CommonOptions& common, const PollardCheckOptions& opt) {
    Rng rng(common.seed);
    json results = json::array();
    bool all_hold = true;
    auto push = [&](const PollardReport& rep) {
        results.push_back({{"N", rep.N},
                           {"t", rep.t},
                           {"level_set_sizes", rep.level_set_sizes},
                           {"lhs", rep.lhs},
                           {"rhs", rep.rhs},
                           {"holds", rep.holds}});
        all_hold = all_hold && rep.holds;
    };

    if (!opt.a.empty() || !opt.b.empty()) {
        const ResidueSet A(opt.N, opt.a);
        const ResidueSet B(opt.N, opt.b);
        const std::uint64_t t_max = std::min(A.size(), B.size());
        if (opt.t != 0)
            push(pollard_check(A, B, opt.t));
        else
            for (std::uint64_t t = 1; t <= t_max; ++t) push(pollard_check(A, B, t));
    } else {
        for (std::uint64_t i = 0; i < opt.trials; ++i) {
            ResidueSet A = random_subset(opt.N, 1 + rng.below(opt.N), rng);
            ResidueSet B = random_subset(opt.N, 1 + rng.below(opt.N), rng);
            const std::uint64_t t =
                opt.t != 0 ? opt.t : 1 + rng.below(std::min(A.size(), B.size()));
            if (t > std::min(A.size(), B.size())) continue;
            push(pollard_check(A, B, t));
        }
    }

    json params = {{"N", opt.N},
                   {"t", opt.t},
                   {"explicit", !opt.a.empty() || !opt.b.empty()},
                   {"trials", opt.trials}};
    json doc;
    doc["manifest"] =
        make_manifest("pollard-check", params, common.seed, all_hold ? "ok" : "violations");
    doc["results"] = results;
    emit_output(common, doc.dump(2));
    return all_hold ? kOk : kViolation;
}

int cmd_lemma3_verify(const CommonOptions& common, const Lemma3VerifyOptions& opt) {
    Rng rng(common.seed);
    json results = json::array();
    bool any_violation = false;
    for (std::uint64_t trial = 0; trial < opt.trials; ++trial) {
        std::vector<ResidueSet> sets;
        for (std::uint64_t size : opt.sizes) {
            if (size == 0 || size > opt.N)
                throw std::invalid_argument("lemma3-verify: set sizes must lie in [1, N]");
            sets.push_back(random_subset(opt.N, size, rng));
        }
        const std::uint64_t n = opt.n ? *opt.n : rng.below(opt.N);
        const Lemma3Report rep = lemma3_verify(sets, n);
        results.push_back({{"N", rep.N},
                           {"k", rep.k},
                           {"n", rep.n},
                           {"theta", rational_to_string(rep.theta)},
                           {"bound", rational_to_string(rep.bound)},
                           {"actual", rep.actual},
                           {"hypothesis_met", rep.hypothesis_met},
                           {"hypothesis_note", rep.hypothesis_note},
                           {"holds", rep.holds}});
        if (rep.hypothesis_met && !rep.holds) any_violation = true;
    }
    json params = {{"N", opt.N}, {"sizes", opt.sizes}, {"trials", opt.trials}};
    if (opt.n) params["n"] = *opt.n;
    json doc;
    doc["manifest"] =
        make_manifest("lemma3-verify", params, common.seed, any_violation ? "violations" : "ok");
    doc["results"] = results;
    emit_output(common, doc.dump(2));
    return any_violation ? kViolation : kOk;
}

int cmd_density_goldbach(const CommonOptions& common, const DensityGoldbachOptions& opt) {
    if (opt.n_hi > 100'000'000ULL)
        throw std::invalid_argument("density-goldbach: n_hi capped at 1e8");
    if (opt.n_lo > opt.n_hi) throw std::invalid_argument("density-goldbach: empty range");
    const PrimeSubsetSpec s1 = load_spec(opt.spec1);
    const PrimeSubsetSpec s2 = load_spec(opt.spec2);
    const PrimeSubsetSpec s3 = load_spec(opt.spec3);
    const PrimeSieve sieve = make_sieve(opt.n_hi);

    const auto rows = representation_survey(opt.n_lo, opt.n_hi, s1, s2, s3, sieve);
    std::ostringstream csv;
    csv << "n,found,p1,p2,p3\n";
    std::uint64_t found = 0, none = 0;
    for (const auto& row : rows) {
        if (row.witness) {
            ++found;
            csv << row.n << ",1," << row.witness->p1 << ',' << row.witness->p2 << ','
                << row.witness->p3 << '\n';
        } else {
            ++none;
            csv << row.n << ",0,,,\n";
        }
    }
    emit_output(common, csv.str());
    std::cerr << "density-goldbach: " << found << " represented, " << none << " without, over ["
              << opt.n_lo << ", " << opt.n_hi << "]\n";
    return kOk;
}

int cmd_transfer(const CommonOptions& common, const TransferOptions& opt) {
    if (opt.n == 0 || opt.n % 2 == 0)
        throw std::invalid_argument("transfer: n must be a positive odd integer");
    const std::array<PrimeSubsetSpec, 3> specs = {load_spec(opt.spec1), load_spec(opt.spec2),
                                                  load_spec(opt.spec3)};
    TransferConfig cfg;
    cfg.kappa_override = opt.kappa;
    cfg.delta = opt.delta;
    cfg.epsilon = opt.epsilon;
    if (opt.w != 0) cfg.w_override = opt.w;
    cfg.C = opt.C;
    cfg.threads = common.threads;
    if (opt.n_policy == "smallest")
        cfg.n_policy = TransferConfig::NPolicy::Smallest;
    else if (opt.n_policy == "largest")
        cfg.n_policy = TransferConfig::NPolicy::Largest;
    else
        throw std::invalid_argument("transfer: n-policy must be smallest|largest");
    if (opt.d1 >= 0.0) cfg.density_overrides[0] = opt.d1;
    if (opt.d2 >= 0.0) cfg.density_overrides[1] = opt.d2;
    if (opt.d3 >= 0.0) cfg.density_overrides[2] = opt.d3;

    const PrimeSieve sieve = make_sieve(2 * opt.n / 3 + 1);

    json params = {{"n", opt.n},
                   {"spec1", opt.spec1},
                   {"spec2", opt.spec2},
                   {"spec3", opt.spec3},
                   {"kappa", jnum(opt.kappa)},
                   {"delta", jnum(opt.delta)},
                   {"epsilon", jnum(opt.epsilon)},
                   {"w", opt.w},
                   {"C", jnum(opt.C)},
                   {"n_policy", opt.n_policy},
                   {"grid", opt.grid}};

    if (!opt.grid.empty()) {
        const auto split = opt.grid.find('x');
        if (split == std::string::npos)
            throw std::invalid_argument("transfer: grid must look like \"0.1,0.2x0.02,0.05\"");
        const auto deltas = parse_double_list(opt.grid.substr(0, split));
        const auto epsilons = parse_double_list(opt.grid.substr(split + 1));
        if (deltas.empty() || epsilons.empty())
            throw std::invalid_argument("transfer: empty grid axis");
        const PipelineContext ctx = build_pipeline_context(opt.n, specs, cfg, sieve);
        std::ostringstream csv;
        csv << "delta,epsilon,gap,term_eps2_delta,term_delta14,measured_C1,"
               "R1,R2,R3,B1,B2,B3,triple_raw,triple_smoothed,lemma4_smoothed,"
               "lemma4_bound_kappa9\n";
        for (double d : deltas) {
            for (double e : epsilons) {
                const SpectralStage st = run_spectral_stage(ctx, d, e);
                csv << format_sig12(d) << ',' << format_sig12(e) << ','
                    << format_sig12(st.lemma1.gap) << ','
                    << format_sig12(st.lemma1.term_eps2_delta) << ','
                    << format_sig12(st.lemma1.term_delta14) << ','
                    << format_sig12(st.lemma1.measured_C1) << ','
                    << st.spectra[0].frequencies.size() << ','
                    << st.spectra[1].frequencies.size() << ','
                    << st.spectra[2].frequencies.size() << ',' << st.bohr[0].size() << ','
                    << st.bohr[1].size() << ',' << st.bohr[2].size() << ','
                    << format_sig12(st.lemma1.triple_raw) << ','
                    << format_sig12(st.lemma1.triple_smoothed) << ','
                    << format_sig12(st.lemma4.smoothed_sum) << ','
                    << format_sig12(st.lemma4.bound_kappa9) << '\n';
            }
        }
        emit_output(common, csv.str());
        return kOk;
    }

    const TransferReport rep = run_pipeline(opt.n, specs, cfg, sieve);
    json doc;
    doc["manifest"] =
        make_manifest("transfer", params, common.seed, rep.witness_found ? "ok" : "no-witness");
    doc["report"] = transfer_report_to_json(rep);
    emit_output(common, doc.dump(2));
    return rep.witness_found ? kOk : kViolation;
}

int cmd_counterexample(const CommonOptions& common, const CounterexampleOptions& opt) {
    json doc;
    int status = kOk;
    if (opt.kind == "binary") {
        const PrimeSieve sieve = make_sieve(std::max(opt.x_max, opt.x_density));
        const BinaryCounterexample ce =
            binary_counterexample(opt.w, opt.x_max, opt.x_density, sieve);
        const bool ok = ce.violations.empty() && ce.paper_violations.empty() && ce.density_ok;
        json params = {{"kind", "binary"},
                       {"w", opt.w},
                       {"x_max", opt.x_max},
                       {"x_density", opt.x_density}};
        doc["manifest"] =
            make_manifest("counterexample", params, common.seed, ok ? "ok" : "violations");
        json cert;
        cert["kind"] = "binary";
        cert["w"] = ce.w;
        cert["W_odd"] = ce.W_odd;
        cert["W_full"] = ce.W_full;
        cert["p1_spec"] = ce.p1_spec;
        cert["p2_spec"] = ce.p2_spec;
        cert["x_max"] = ce.x_max;
        cert["targets_checked"] = ce.targets_checked;
        cert["paper_targets_checked"] = ce.paper_targets_checked;
        cert["violations"] = ce.violations;
        cert["density"] = {{"x", ce.x_density},
                           {"d1", jnum(ce.d1)},
                           {"d2", jnum(ce.d2)},
                           {"theoretical_gap", jnum(ce.theoretical_gap)},
                           {"threshold", jnum(2.0 - ce.theoretical_gap - 0.05)},
                           {"ok", ce.density_ok}};
        doc["certificate"] = cert;
        status = ok ? kOk : kViolation;
    } else if (opt.kind == "blocks") {
        std::vector<std::uint64_t> schedule;
        if (!opt.schedule.empty())
            schedule = parse_u64_list(opt.schedule);
        else if (opt.paper_kmax > 0)
            schedule = paper_block_schedule(opt.paper_kmax, 1'000'000'000ULL);
        else if (!opt.geometric.empty()) {
            const auto parts = parse_u64_list(opt.geometric);
            if (parts.size() != 3)
                throw std::invalid_argument("counterexample: geometric needs base,ratio,count");
            std::uint64_t v = parts[0];
            for (std::uint64_t i = 0; i < parts[2]; ++i) {
                schedule.push_back(v);
                v *= parts[1];
            }
        } else {
            throw std::invalid_argument(
                "counterexample: blocks needs --schedule, --paper-kmax, or --geometric");
        }
        std::uint64_t top = 100;
        if (schedule.size() >= 2)
            top = schedule.back() + schedule[schedule.size() - 2] + 2;
        const PrimeSieve sieve = make_sieve(top);
        const BlocksCounterexample ce = blocks_counterexample(schedule, sieve);
        json params = {{"kind", "blocks"}, {"schedule", schedule}};
        doc["manifest"] = make_manifest("counterexample", params, common.seed,
                                        ce.all_verified ? "ok" : "violations");
        json cert;
        cert["kind"] = "blocks";
        cert["schedule"] = ce.schedule;
        json blocks = json::array();
        for (const auto& b : ce.blocks) {
            blocks.push_back({{"k", b.k},
                              {"lo", b.lo},
                              {"hi", b.hi},
                              {"n_k", b.n_k},
                              {"block_size", b.block_size},
                              {"a_k_size", b.a_k_size},
                              {"pair_free_within_block", b.pair_free_within_block},
                              {"pair_free_full", b.pair_free_full}});
        }
        cert["blocks"] = std::move(blocks);
        cert["all_verified"] = ce.all_verified;
        doc["certificate"] = cert;
        status = ce.all_verified ? kOk : kViolation;
    } else {
        throw std::invalid_argument("counterexample: kind must be binary|blocks");
    }
    emit_output(common, doc.dump(2));
    return status;
}

int cmd_vinogradov_ratio(const CommonOptions& common, const VinogradovRatioOptions& opt) {
    if (opt.n_lo < 9 || opt.n_lo > opt.n_hi || opt.n_hi > 1'000'000ULL)
        throw std::invalid_argument("vinogradov-ratio: need 9 <= n_lo <= n_hi <= 1e6");
    if (opt.samples == 0) throw std::invalid_argument("vinogradov-ratio: samples must be > 0");
    const PrimeSieve sieve = make_sieve(opt.n_hi);
    Rng rng(common.seed);

    std::vector<std::uint64_t> ns;
    if (opt.samples >= (opt.n_hi - opt.n_lo) / 2 + 1) {
        for (std::uint64_t n = opt.n_lo | 1ULL; n <= opt.n_hi; n += 2) ns.push_back(n);
    } else {
        // Evenly spaced odd samples with seeded jitter inside each cell.
        const std::uint64_t span = opt.n_hi - opt.n_lo;
        for (std::uint64_t i = 0; i < opt.samples; ++i) {
            std::uint64_t n =
                opt.n_lo + span * i / opt.samples + rng.below(span / opt.samples + 1);
            n |= 1ULL;
            while (n > opt.n_hi) n -= 2;
            ns.push_back(n);
        }
        std::sort(ns.begin(), ns.end());
        ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    }

    json samples = json::array();
    std::vector<double> ratios;
    std::ostringstream csv;
    csv << "n,r,weighted,singular,singular_tail,expected,ratio\n";
    for (std::uint64_t n : ns) {
        const TripleCount tc = vinogradov_weighted_count(n, sieve);
        const SingularSeries ss = singular_series(n, opt.cutoff, sieve);
        const double expected = 0.5 * ss.value * static_cast<double>(n) * static_cast<double>(n);
        const double ratio = expected > 0.0 ? tc.weighted / expected : 0.0;
        ratios.push_back(ratio);
        samples.push_back({{"n", n},
                           {"r", tc.r},
                           {"weighted", jnum(tc.weighted)},
                           {"singular", jnum(ss.value)},
                           {"singular_tail", jnum(ss.tail_bound)},
                           {"expected", jnum(expected)},
                           {"ratio", jnum(ratio)}});
        csv << n << ',' << tc.r << ',' << format_sig12(tc.weighted) << ','
            << format_sig12(ss.value) << ',' << format_sig12(ss.tail_bound) << ','
            << format_sig12(expected) << ',' << format_sig12(ratio) << '\n';
    }
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted.size() % 2 == 1
                              ? sorted[sorted.size() / 2]
                              : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);

    if (common.format == "csv") {
        emit_output(common, csv.str());
    } else {
        json params = {{"n_lo", opt.n_lo},
                       {"n_hi", opt.n_hi},
                       {"samples", opt.samples},
                       {"cutoff", opt.cutoff}};
        json doc;
        doc["manifest"] = make_manifest("vinogradov-ratio", params, common.seed, "ok");
        doc["samples"] = samples;
        doc["summary"] = {{"count", sorted.size()},
                          {"min", jnum(sorted.front())},
                          {"max", jnum(sorted.back())},
                          {"median", jnum(median)}};
        emit_output(common, doc.dump(2));
    }
    return kOk;
}

int cmd_density_profile(const CommonOptions& common, const DensityProfileOptions& opt) {
    const PrimeSubsetSpec spec = load_spec(opt.spec);
    const PrimeSieve sieve = make_sieve(opt.x_max);
    const DensityProfile prof = relative_density_profile(spec, opt.x_max, opt.grid_size, sieve);
    if (common.format == "csv") {
        emit_output(common, density_profile_csv(prof));
    } else {
        json params = {{"spec", opt.spec}, {"x_max", opt.x_max}, {"grid_size", opt.grid_size}};
        json doc;
        doc["manifest"] = make_manifest("density-profile", params, common.seed, "ok");
        json grid = json::array();
        for (std::size_t j = 0; j < prof.grid.size(); ++j) {
            grid.push_back({{"x", prof.grid[j]},
                            {"subset_count", prof.subset_counts[j]},
                            {"prime_count", prof.prime_counts[j]},
                            {"ratio", jnum(prof.ratios[j])}});
        }
        doc["grid"] = std::move(grid);
        doc["summary"] = {{"empirical_lower", jnum(prof.empirical_lower)},
                          {"empirical_upper", jnum(prof.empirical_upper)}};
        emit_output(common, doc.dump(2));
    }
    std::cerr << "density-profile: empirical lower " << format_sig12(prof.empirical_lower)
              << ", upper " << format_sig12(prof.empirical_upper) << "\n";
    return kOk;
}

}  // namespace trisum::cli
