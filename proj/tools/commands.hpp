#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace trisum::cli {

// Exit-status contract: 0 success, 1 mathematical violation discovered,
// 2 usage or input error.
inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kUsage = 2;

inline constexpr const char* kVersion = "1.0.0";

struct CommonOptions {
    std::uint64_t seed = 1;
    std::string out;            // empty = stdout
    std::string format = "json";  // "json" or "csv"
    unsigned threads = 1;
};

// Every JSON document carries this echo block; wall-clock duration is
// reported on stderr only so that re-runs are byte-identical.
nlohmann::json make_manifest(const std::string& subcommand, const nlohmann::json& parameters,
                             std::uint64_t seed, const std::string& outcome);

void emit_output(const CommonOptions& common, const std::string& payload);

struct VerifyAdditionOptions {
    std::uint64_t q_max = 105;
    std::uint64_t trials = 20;
    std::uint64_t oracle_max = 105;
};
int cmd_verify_addition(const CommonOptions& common, const VerifyAdditionOptions& opt);

struct VerifySumsetOptions {
    std::uint64_t pollard_exhaustive_max = 11;
    std::uint64_t pollard_random = 10'000;
    std::uint64_t lemma3_instances = 1'000;
};
int cmd_verify_sumset(const CommonOptions& common, const VerifySumsetOptions& opt);

struct PollardCheckOptions {
    std::uint64_t N = 31;
    std::vector<std::uint64_t> a, b;  // explicit sets; empty = random mode
    std::uint64_t t = 0;              // 0 = all admissible t
    std::uint64_t trials = 100;
};
int cmd_pollard_check(const CommonOptions& common, const PollardCheckOptions& opt);

struct Lemma3VerifyOptions {
    std::uint64_t N = 101;
    std::vector<std::uint64_t> sizes = {56, 56, 56};
    std::optional<std::uint64_t> n;  // default: random
    std::uint64_t trials = 100;
};
int cmd_lemma3_verify(const CommonOptions& common, const Lemma3VerifyOptions& opt);

struct DensityGoldbachOptions {
    std::string spec1, spec2, spec3;  // file paths or "all-primes"
    std::uint64_t n_lo = 9;
    std::uint64_t n_hi = 9'999;
};
int cmd_density_goldbach(const CommonOptions& common, const DensityGoldbachOptions& opt);

struct TransferOptions {
    std::uint64_t n = 0;
    std::string spec1 = "all-primes", spec2 = "all-primes", spec3 = "all-primes";
    double kappa = 0.0;  // 0 = paper formula
    double delta = 0.2;
    double epsilon = 0.05;
    std::uint64_t w = 0;  // 0 = default w(n)
    double C = 0.0;       // 0 = 2/kappa
    std::string n_policy = "smallest";
    double d1 = -1.0, d2 = -1.0, d3 = -1.0;  // <0 = measured
    std::string grid;  // "d1,d2x e1,e2" -> CSV sweep
};
int cmd_transfer(const CommonOptions& common, const TransferOptions& opt);

struct CounterexampleOptions {
    std::string kind = "binary";
    std::uint64_t w = 5;
    std::uint64_t x_max = 100'000;
    std::uint64_t x_density = 1'000'000;
    std::string schedule;      // "a,b,c"
    std::uint64_t paper_kmax = 0;
    std::string geometric;     // "base,ratio,count"
};
int cmd_counterexample(const CommonOptions& common, const CounterexampleOptions& opt);

struct VinogradovRatioOptions {
    std::uint64_t n_lo = 50'000;
    std::uint64_t n_hi = 100'000;
    std::uint64_t samples = 50;
    std::uint64_t cutoff = 10'000;
};
int cmd_vinogradov_ratio(const CommonOptions& common, const VinogradovRatioOptions& opt);

struct DensityProfileOptions {
    std::string spec;
    std::uint64_t x_max = 1'000'000;
    std::uint64_t grid_size = 16;
};
int cmd_density_profile(const CommonOptions& common, const DensityProfileOptions& opt);

}  // namespace trisum::cli
