#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "doctest.h"
#include "primelab/cli.hpp"
#include "primelab/dickson.hpp"
#include "primelab/digits.hpp"
#include "primelab/gowers.hpp"

using namespace primelab;
using namespace primelab::cli;

namespace {

struct Invocation {
    int code = 0;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "primelab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Invocation r;
    r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

struct ParsedCsv {
    std::vector<std::string> meta;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
    return out;
}

ParsedCsv parse_csv(const std::string& text) {
    ParsedCsv csv;
    std::stringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("#", 0) == 0) csv.meta.push_back(line);
        else if (csv.header.empty()) csv.header = split_commas(line);
        else csv.rows.push_back(split_commas(line));
    }
    return csv;
}

double number(const std::string& s) { return std::stod(s); }

}  // namespace

TEST_CASE("number parsing") {
    CHECK(parse_real("1e7") == 1e7);
    CHECK(parse_real("0.25") == 0.25);
    CHECK(parse_real("1/4") == 0.25);
    CHECK(parse_real(" 2^0.5 ") == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(parse_real("-3") == -3.0);
    CHECK(parse_count("2^24") == 16777216u);
    CHECK(parse_count("2^62") == (std::uint64_t{1} << 62));
    CHECK(parse_count("1e5") == 100000u);
    CHECK(parse_integer("-7") == -7);
    CHECK_THROWS_AS(parse_real("abc"), UsageError);
    CHECK_THROWS_AS(parse_real("1e7x"), UsageError);
    CHECK_THROWS_AS(parse_real(""), UsageError);
    CHECK_THROWS_AS(parse_real("1/0"), UsageError);
    CHECK_THROWS_AS(parse_count("0.5"), UsageError);
    CHECK_THROWS_AS(parse_count("-1"), UsageError);
    CHECK_THROWS_AS(parse_count("2^64"), UsageError);
}

TEST_CASE("table rendering") {
    Table t;
    t.meta = {{"alpha", "1"}};
    t.columns = {"name", "x", "n"};
    t.rows.push_back({std::string("a,b"), 0.1, std::int64_t(-3)});
    CHECK(to_csv(t) == "# alpha: 1\nname,x,n\n\"a,b\",0.10000000000000001,-3\n");
    CHECK(to_plain(t) == "a,b 0.10000000000000001 -3\n");
    const auto doc = nlohmann::json::parse(to_json(t));
    CHECK(doc["meta"]["alpha"] == "1");
    CHECK(doc["rows"][0]["x"].get<double>() == 0.1);
    CHECK(doc["rows"][0]["n"].get<std::int64_t>() == -3);
    CHECK(format_cell(std::nan("")) == "nan");
}

TEST_CASE("complexity subcommand") {
    const auto plain = invoke({"--format", "plain", "complexity", "--system", "1 0 0; 1 1 0; 1 2 0"});
    CHECK(plain.code == kExitOk);
    CHECK(plain.out == "1\n");
    const auto csv = parse_csv(invoke({"complexity", "--system", "1 0 0; 1 1 0; 1 2 0"}).out);
    REQUIRE(csv.rows.size() == 1);
    CHECK(csv.header == std::vector<std::string>{"complexity"});
    CHECK(csv.rows[0][0] == "1");
    CHECK(invoke({"--format", "plain", "complexity", "--system", "1 0 0; 0 1 0; -1 -1 1001"}).out == "1\n");
    CHECK(invoke({"--format", "plain", "complexity", "--system", "1 0 0; 1 1 0; 1 2 0; 1 3 0"}).out == "2\n");
    CHECK(invoke({"--format", "plain", "complexity", "--system", "1 0; 1 2"}).out == "INFINITE\n");
}

TEST_CASE("exit codes") {
    CHECK(invoke({}).code == kExitUsage);
    CHECK(invoke({"no-such-command"}).code == kExitUsage);
    CHECK(invoke({"gaps", "--N", "ten"}).code == kExitUsage);
    CHECK(invoke({"gaps", "--bogus", "1"}).code == kExitUsage);
    CHECK(invoke({"--format", "xml", "gaps"}).code == kExitUsage);
    CHECK(invoke({"--help"}).code == kExitOk);

    const auto domain = invoke({"gallagher", "--k", "5", "--H", "3"});
    CHECK(domain.code == kExitDomain);
    CHECK(domain.err.find('\n') == domain.err.size() - 1);
    CHECK(invoke({"wtrick", "--W", "6", "--b", "3", "--M", "10"}).code == kExitDomain);
    CHECK(invoke({"gaps", "--gamma", "0.7"}).code == kExitDomain);
    CHECK(invoke({"dickson", "--box", "1 1e9"}).code == kExitBudget);
    CHECK(invoke({"digits-corr", "--Xmax", "1e9"}).code == kExitBudget);
    CHECK(invoke({"complexity", "--system", "1 0; 1 1; 1 2; 1 3; 1 4; 1 5; 1 6; 1 7; 1 8; 1 9; 1 10"}).code ==
          kExitBudget);
}

TEST_CASE("parameters are echoed") {
    const auto r = invoke({"--seed", "7", "gallagher", "--H", "40"});
    REQUIRE(r.code == kExitOk);
    const auto csv = parse_csv(r.out);
    const std::vector<std::string> expected = {"# command: gallagher", "# seed: 7", "# k: 1", "# H: 40",
                                               "# P_max: 1e5"};
    CHECK(csv.meta == expected);
}

TEST_CASE("reruns are byte-identical") {
    const std::vector<std::vector<std::string>> configs = {
        {"gaps", "--N", "2e4"},
        {"eq333", "--R", "400"},
        {"bv", "--N", "2e4", "--Q", "30"},
        {"dickson", "--system", "1 0 0; 1 1 0; 1 2 0", "--box", "1 60; 1 30", "--P_max", "1000"},
        {"dickson", "--system", "1 0 0 1; 0 1 0 1; 0 0 1 1; 1 1 1 0", "--box", "1 40; 1 40; 1 40"},
        {"tuple-series", "--tuple", "0,2,6"},
        {"gallagher", "--k", "2", "--H", "200", "--P_max", "1000"},
        {"complexity"},
        {"digits-corr", "--Xmax", "2^16", "--steps", "3"},
        {"spectrum", "--k", "10"},
        {"spectrum", "--k", "10", "--method", "direct"},
        {"vaughan", "--X", "5000", "--f", "e-sqrt2"},
        {"type-sums", "--m_exp", "6", "--n_exp", "7"},
        {"gowers", "--N", "31", "--f", "random", "--k", "4"},
        {"wtrick", "--M", "2000", "--W", "30"},
        {"heisenberg", "--n", "20"},
    };
    for (const auto& config : configs) {
        for (const char* format : {"csv", "json"}) {
            auto args = config;
            args.insert(args.begin(), {"--seed", "3", "--format", format});
            const auto first = invoke(args), second = invoke(args);
            INFO(config[0] << " " << format);
            CHECK(first.code == kExitOk);
            CHECK(first.err.empty());
            CHECK(first.out == second.out);
            CHECK(!first.out.empty());
        }
    }
}

TEST_CASE("CSV and JSON round-trip") {
    const auto csv = parse_csv(invoke({"digits-corr", "--Xmax", "2^18", "--steps", "3"}).out);
    const auto doc = nlohmann::json::parse(invoke({"--format", "json", "digits-corr", "--Xmax", "2^18", "--steps", "3"}).out);
    const FactorSieve sieve(1 << 18);
    REQUIRE(csv.rows.size() == 3);
    REQUIRE(doc["rows"].size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto X = static_cast<std::uint64_t>(number(csv.rows[i][0]));
        CHECK(X == (std::uint64_t{1} << (14 + 2 * i)));
        const double corr = digits::prime_digit_correlation(sieve, X);
        CHECK(std::abs(number(csv.rows[i][1]) - corr) <= 1e-12 * std::abs(corr));
        CHECK(std::abs(doc["rows"][i]["correlation"].get<double>() - corr) <= 1e-12 * std::abs(corr));
        CHECK(doc["rows"][i]["X"].get<std::uint64_t>() == X);
    }

    const auto series = parse_csv(invoke({"tuple-series", "--tuple", "0,4,6", "--P_max", "5000"}).out);
    const double expected = dickson::tuple_singular_series(PrimeTuple{0, 4, 6}, 5000);
    CHECK(std::abs(number(series.rows[0][1]) - expected) <= 1e-12 * expected);

    const auto orbit_doc = nlohmann::json::parse(invoke({"--format", "json", "heisenberg", "--alpha", "0.3", "--beta", "1/7", "--gamma", "-1.1", "--n", "50"}).out);
    for (std::uint64_t n = 0; n <= 50; ++n) {
        const auto o = gowers::heisenberg_orbit(0.3, 1.0 / 7.0, -1.1, n);
        const auto& row = orbit_doc["rows"][n];
        CHECK(row["n"].get<std::uint64_t>() == n);
        CHECK(std::abs(row["b"].get<double>() - o.power.b) <= 1e-12 * (1 + std::abs(o.power.b)));
        CHECK(std::abs(row["reduced_b"].get<double>() - o.reduced.b) <= 1e-12);
    }

    const auto gowers_csv = parse_csv(invoke({"gowers", "--N", "61", "--f", "quadratic"}).out);
    REQUIRE(gowers_csv.rows.size() == 2);
    CHECK(std::abs(number(gowers_csv.rows[1][1]) - 1.0) <= 1e-9);
}

TEST_CASE("output file") {
    const std::string path = "test_cli_output.csv";
    const auto r = invoke({"--output", path, "tuple-series"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(text.str() == invoke({"tuple-series"}).out);
    std::remove(path.c_str());
}
