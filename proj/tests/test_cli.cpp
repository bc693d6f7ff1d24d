#include "schema_check.hpp"

#include "doctest.h"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Launches the built binary, captures stdout, discards stderr.
RunResult run_cli(const std::string& args) {
    const std::string out_path = std::string(TRISUM_CLI_PATH) + ".stdout.tmp";
    const std::string cmd =
        std::string(TRISUM_CLI_PATH) + " " + args + " > " + out_path + " 2> /dev/null";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.status = WEXITSTATUS(rc);
    r.out = slurp(out_path);
    std::remove(out_path.c_str());
    return r;
}

json load_schema(const std::string& name) {
    const std::string path =
        std::string(TRISUM_SOURCE_DIR) + "/schemas/" + name + ".schema.json";
    std::ifstream in(path);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

void require_schema_valid(const std::string& schema_name, const json& doc) {
    const auto violations = trisum::testing::schema_check(load_schema(schema_name), doc);
    for (const auto& v : violations) MESSAGE(v);
    REQUIRE(violations.empty());
}

std::string spec_path(const std::string& name) {
    return std::string(TRISUM_SOURCE_DIR) + "/specs/" + name;
}

}  // namespace

TEST_CASE("verify-addition: small run is clean and schema-valid") {
    const RunResult r = run_cli("verify-addition --q-max 35 --trials 3 --seed 7");
    CHECK(r.status == 0);
    const json doc = json::parse(r.out);
    require_schema_valid("verify_addition", doc);
    CHECK(doc.at("violations").empty());
    CHECK(doc.at("manifest").at("outcome") == "ok");
}

TEST_CASE("verify-addition: q_max 0 is a usage error") {
    CHECK(run_cli("verify-addition --q-max 0").status == 2);
}

TEST_CASE("unknown subcommand and missing required flags exit 2") {
    CHECK(run_cli("no-such-command").status == 2);
    CHECK(run_cli("transfer").status == 2);  // --n required
}

TEST_CASE("determinism: identical seed gives byte-identical output files") {
    const std::string out1 = std::string(TRISUM_CLI_PATH) + ".det1.json";
    const std::string out2 = std::string(TRISUM_CLI_PATH) + ".det2.json";
    const std::string args = "verify-sumset --pollard-exhaustive-max 7 --pollard-random 200 "
                             "--lemma3-instances 20 --seed 99 --out ";
    CHECK(run_cli(args + out1).status == 0);
    CHECK(run_cli(args + out2).status == 0);
    const std::string a = slurp(out1), b = slurp(out2);
    CHECK(!a.empty());
    CHECK(a == b);
    std::remove(out1.c_str());
    std::remove(out2.c_str());
}

TEST_CASE("verify-sumset output is schema-valid") {
    const RunResult r = run_cli(
        "verify-sumset --pollard-exhaustive-max 5 --pollard-random 50 --lemma3-instances 5");
    CHECK(r.status == 0);
    require_schema_valid("verify_sumset", json::parse(r.out));
}

TEST_CASE("pollard-check on the worked example") {
    const RunResult r = run_cli("pollard-check --N 7 --a 1,2,4 --b 1,2,4 --t 2");
    CHECK(r.status == 0);
    const json doc = json::parse(r.out);
    require_schema_valid("pollard_check", doc);
    const auto& res = doc.at("results").at(0);
    CHECK(res.at("lhs") == 9);
    CHECK(res.at("rhs") == 8);
    CHECK(res.at("holds") == true);
}

TEST_CASE("lemma3-verify randomized run is schema-valid") {
    const RunResult r = run_cli("lemma3-verify --N 101 --sizes 60,60,60 --trials 10 --seed 3");
    CHECK(r.status == 0);
    require_schema_valid("lemma3_verify", json::parse(r.out));
}

TEST_CASE("density-goldbach: sharpness specs produce NONE exactly at 5 mod 6") {
    const RunResult r = run_cli("density-goldbach --spec1 " + spec_path("primes_1_mod_3.json") +
                                " --spec2 " + spec_path("primes_1_mod_3.json") + " --spec3 " +
                                spec_path("primes_without_3.json") + " --n-lo 19 --n-hi 499");
    CHECK(r.status == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "n,found,p1,p2,p3");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        const auto comma = line.find(',');
        const std::uint64_t n = std::stoull(line.substr(0, comma));
        const bool found = line[comma + 1] == '1';
        CHECK(found == (n % 6 != 5));
    }
    CHECK(rows == (499 - 19) / 2 + 1);
}

TEST_CASE("density-goldbach: malformed spec file exits 2") {
    const std::string bad = std::string(TRISUM_CLI_PATH) + ".bad.json";
    {
        std::ofstream out(bad);
        out << "{ not json";
    }
    const RunResult r = run_cli("density-goldbach --spec1 " + bad + " --spec2 " + bad +
                                " --spec3 " + bad + " --n-lo 9 --n-hi 99");
    CHECK(r.status == 2);
    std::remove(bad.c_str());
    const RunResult missing = run_cli(
        "density-goldbach --spec1 /nonexistent.json --spec2 all-primes --spec3 all-primes");
    CHECK(missing.status == 2);
}

TEST_CASE("transfer: JSON report validates and finds a witness") {
    const RunResult r = run_cli("transfer --n 10001 --kappa 0.03 --w 5");
    CHECK(r.status == 0);
    const json doc = json::parse(r.out);
    require_schema_valid("transfer", doc);
    const auto& rep = doc.at("report");
    CHECK(rep.at("witness_found") == true);
    CHECK(rep.at("wraparound_free") == true);
    std::uint64_t sum = 0;
    for (const auto& p : rep.at("witness_primes")) sum += p.get<std::uint64_t>();
    CHECK(sum == 10001);
}

TEST_CASE("transfer: even n is a usage error") {
    CHECK(run_cli("transfer --n 10000").status == 2);
}

TEST_CASE("transfer: grid sweep emits one CSV row per pair") {
    const RunResult r =
        run_cli("transfer --n 10001 --kappa 0.03 --w 5 --grid 0.1,0.3x0.02,0.05");
    CHECK(r.status == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line.rfind("delta,epsilon,", 0) == 0);
    int rows = 0;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);
}

TEST_CASE("counterexample binary: schema-valid certificate with no violations") {
    const RunResult r =
        run_cli("counterexample --kind binary --w 5 --x-max 5000 --x-density 100000");
    CHECK(r.status == 0);
    const json doc = json::parse(r.out);
    require_schema_valid("counterexample_binary", doc);
    CHECK(doc.at("certificate").at("violations").empty());
}

TEST_CASE("counterexample blocks: schema-valid certificate") {
    const RunResult r = run_cli("counterexample --kind blocks --geometric 200,2,6");
    CHECK(r.status == 0);
    const json doc = json::parse(r.out);
    require_schema_valid("counterexample_blocks", doc);
    CHECK(doc.at("certificate").at("all_verified") == true);
}

TEST_CASE("vinogradov-ratio: JSON output is schema-valid") {
    const RunResult r =
        run_cli("vinogradov-ratio --n-lo 9001 --n-hi 9999 --samples 5 --cutoff 500 --seed 5");
    CHECK(r.status == 0);
    const json doc = json::parse(r.out);
    require_schema_valid("vinogradov_ratio", doc);
    CHECK(doc.at("samples").size() >= 1);
}

TEST_CASE("density-profile: csv and json formats") {
    const RunResult csv = run_cli("density-profile --spec " + spec_path("all_primes.json") +
                                  " --x-max 10000 --grid-size 8 --format csv");
    CHECK(csv.status == 0);
    CHECK(csv.out.rfind("x,subset_count,prime_count,ratio\n", 0) == 0);

    const RunResult js = run_cli("density-profile --spec " + spec_path("primes_1_mod_3.json") +
                                 " --x-max 10000 --grid-size 8 --format json");
    CHECK(js.status == 0);
    require_schema_valid("density_profile", json::parse(js.out));
}

TEST_CASE("prime subset spec files validate against the shipped schema") {
    for (const char* name : {"all_primes.json", "primes_1_mod_3.json", "primes_without_3.json",
                             "primes_in_blocks.json"}) {
        std::ifstream in(spec_path(name));
        REQUIRE(in.good());
        json doc;
        in >> doc;
        const auto violations =
            trisum::testing::schema_check(load_schema("prime_subset_spec"), doc);
        CHECK(violations.empty());
    }
}
