// Spawned-process tests for the pcf command line.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "json.hpp"
#include "process.hpp"

using nlohmann::json;
using pcf::testing::read_file;
using pcf::testing::run_cli;
using pcf::testing::scratch_dir;

namespace {

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::string line;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(line);
            line.clear();
        } else {
            line += c;
        }
    }
    if (!line.empty()) out.push_back(line);
    return out;
}

json strip_timing(json j) {
    if (j.is_object()) {
        j.erase("elapsed_ns");
        for (auto& [key, value] : j.items()) value = strip_timing(value);
    } else if (j.is_array()) {
        for (auto& value : j) value = strip_timing(value);
    }
    return j;
}

} // namespace

TEST_CASE("pi") {
    auto r = run_cli("pi 11");
    CHECK(r.status == 0);
    CHECK(r.out == "5\n");

    CHECK(run_cli("pi 1").out == "0\n");
    CHECK(run_cli("pi 100000").out == "9592\n");
    for (const char* method : {"naive", "pruned", "set-model", "sieve"}) {
        CHECK(run_cli(std::string("pi 11 --method ") + method).out == "5\n");
    }

    r = run_cli("pi 11 --stats");
    REQUIRE(r.status == 0);
    const auto out = lines(r.out);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == "5");
    const json stats = json::parse(out[1]);
    CHECK(stats["terms_visited"] == "3");

    r = run_cli("--format json pi 11");
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["pi"] == 5);
    CHECK(j["method"] == "pruned");
}

TEST_CASE("refusals and usage errors exit 2") {
    auto r = run_cli("pi 1000 --method naive");
    CHECK(r.status == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("--naive-cap") != std::string::npos);
    CHECK(run_cli("--naive-cap 10 pi 121 --method naive").status == 2);
    CHECK(run_cli("--naive-cap 11 pi 121 --method naive").out == "30\n");

    r = run_cli("pi 100001 --method set-model");
    CHECK(r.status == 2);
    CHECK(r.err.find("--set-model-cap") != std::string::npos);

    CHECK(run_cli("pi abc").status == 2);
    CHECK(run_cli("pi -5").status == 2);
    CHECK(run_cli("pi 0x10").status == 2);
    CHECK(run_cli("pi 99999999999999999999999").status == 2);
    CHECK(run_cli("pi").status == 2);
    CHECK(run_cli("pi 11 --method fast").status == 2);
    CHECK(run_cli("pi 11 --bogus").status == 2);
    CHECK(run_cli("").status == 2);
    CHECK(run_cli("frobnicate").status == 2);
    CHECK(run_cli("--format csv pi 11").status == 2);
    CHECK(run_cli("pi 4611686018427387905").status == 2); // 2^62 + 1
}

TEST_CASE("n guard from flag and environment") {
    CHECK(run_cli("--n-guard 10 pi 11").status == 2);
    CHECK(run_cli("--n-guard 11 pi 11").out == "5\n");
    auto r = run_cli("pi 11", "PCF_MAX_N=10");
    CHECK(r.status == 2);
    CHECK(r.err.find("PCF_MAX_N") != std::string::npos);
    CHECK(run_cli("pi 11", "PCF_MAX_N=100").status == 0);
    CHECK(run_cli("--n-guard 4611686018427387905 pi 11").status == 2);
}

TEST_CASE("help") {
    const auto r = run_cli("--help");
    CHECK(r.status == 0);
    CHECK(r.out.find("PCF_MAX_N") != std::string::npos);
    CHECK(r.out.find("verify") != std::string::npos);
}

TEST_CASE("terms") {
    auto r = run_cli("terms 11");
    REQUIRE(r.status == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "(2)\ts=1\t-\tlcm=2\t4");
    CHECK(rows[1] == "(2,3)\ts=2\t+\tlcm=6\t0");
    CHECK(rows[2] == "(3)\ts=1\t-\tlcm=3\t1");

    CHECK(lines(run_cli("terms 11 --nonzero-only").out).size() == 2);
    r = run_cli("terms 11 --limit 1");
    CHECK(r.status == 0);
    CHECK(lines(r.out).size() == 1);
    CHECK(run_cli("terms 3").out.empty());

    r = run_cli("--format json terms 36 --nonzero-only");
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    REQUIRE(j.is_array());
    bool found = false;
    for (const json& t : j) {
        CHECK(t["value"].get<int>() > 0);
        if (t["tuple"] == json::array({2, 3})) {
            found = true;
            CHECK(t["lcm"] == 6);
            CHECK(t["sign"] == 1);
            CHECK(t["value"] == 5);
        }
    }
    CHECK(found);
    CHECK(json::parse(run_cli("--format json terms 3").out) == json::array());

    r = run_cli("--format csv terms 11");
    REQUIRE(r.status == 0);
    const auto csv = lines(r.out);
    REQUIRE(csv.size() == 4);
    CHECK(csv[0] == "tuple,s,sign,lcm,value");
    CHECK(csv[2] == "\"(2,3)\",2,+,6,0");
}

TEST_CASE("grid") {
    auto r = run_cli("grid 11");
    CHECK(r.status == 0);
    CHECK(r.out.find("10*") != std::string::npos);
    CHECK(r.out.find(" 9*") != std::string::npos);
    CHECK(r.out.find(" 2*") == std::string::npos);
    CHECK(run_cli("grid 4").status == 0);
    r = run_cli("grid 500");
    CHECK(r.status == 2);
    CHECK(r.out.empty());
    CHECK(run_cli("grid 0").status == 2);
}

TEST_CASE("verify") {
    auto r = run_cli("verify --max-n 100 --identity-cases 200");
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["kind"] == "verify");
    CHECK(j["pass"] == true);
    CHECK(j["evaluations"] == 200);
    CHECK(j["identity_checks"]["y_lcm"]["run"] == 200);
    CHECK(r.err.find("PASS") != std::string::npos);

    r = run_cli("--quiet verify --max-n 50 --identity-cases 10");
    CHECK(r.status == 0);
    CHECK(r.err.empty());

    r = run_cli("--naive-cap 11 verify --min-n 130 --max-n 200 --methods naive --identity-cases 0");
    CHECK(r.status == 0);
    const json skipped = json::parse(r.out)["skipped"];
    REQUIRE(skipped.size() == 1);
    CHECK(skipped[0]["from_n"] == 144);
    CHECK(skipped[0]["to_n"] == 200);

    CHECK(run_cli("verify --max-n 0").status == 2);
    CHECK(run_cli("verify --min-n 10 --max-n 5").status == 2);
    CHECK(run_cli("verify").status == 2);
    CHECK(run_cli("verify --max-n 10 --methods pruned,,sieve").status == 2);
    CHECK(run_cli("verify --max-n 10 --methods magic").status == 2);
}

TEST_CASE("verify is deterministic for a fixed seed") {
    const auto a = run_cli("--seed 7 verify --max-n 200 --identity-cases 300");
    const auto b = run_cli("--seed 7 verify --max-n 200 --identity-cases 300");
    REQUIRE(a.status == 0);
    REQUIRE(b.status == 0);
    CHECK(strip_timing(json::parse(a.out)).dump() == strip_timing(json::parse(b.out)).dump());
    CHECK(json::parse(a.out)["seed"] == 7);
}

TEST_CASE("bench") {
    const auto path = (scratch_dir() / "bench.json").string();
    auto r = run_cli("bench --n-list 100,1000 --reps 1 --output '" + path + "'");
    REQUIRE(r.status == 0);
    CHECK(r.out.empty());
    const json j = json::parse(read_file(path));
    CHECK(j["kind"] == "bench");
    CHECK(j["consistent"] == true);
    CHECK(j["entries"].size() == 4);

    r = run_cli("--format csv bench --n-list 11 --methods naive,sieve --reps 1");
    REQUIRE(r.status == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "n,method,pi,elapsed_ns,terms_visited,nonzero_terms,subtrees_pruned");

    r = run_cli("bench --n-list 1000 --methods naive,pruned --reps 1");
    CHECK(r.status == 0);
    CHECK(json::parse(r.out)["entries"][0].contains("skipped"));

    CHECK(run_cli("bench --n-list \"\"").status == 2);
    CHECK(run_cli("bench --n-list 10 --reps 0").status == 2);
    CHECK(run_cli("bench").status == 2);
}
