#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mfpotts/cli.hpp"
#include "mfpotts/critical.hpp"
#include "mfpotts/errors.hpp"

using namespace mfpotts;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "mfpotts");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

std::string data(const char* name) { return std::string(MFPOTTS_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("grids and number formatting") {
    CHECK(parse_grid("1,2.5,3") == std::vector<double>{1, 2.5, 3});
    const auto r = parse_grid("2:4:0.5");
    REQUIRE(r.size() == 5);
    CHECK(r.back() == doctest::Approx(4.0));
    CHECK(parse_grid("0:1:0.1").size() == 11);
    CHECK_THROWS_AS(parse_grid("1,x"), DomainError);
    CHECK_THROWS_AS(parse_grid("1:2"), DomainError);
    CHECK_THROWS_AS(parse_grid("2:1:0.1"), DomainError);
    CHECK_THROWS_AS(parse_grid("0:1:0"), DomainError);
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("critical") {
    const auto second = run({"critical", "--q", "2", "--z", "3"});
    REQUIRE(second.code == 0);
    const auto j = nlohmann::json::parse(second.out);
    CHECK(j["beta_one"] == 2.0);
    CHECK(j["beta_c"] == 2.0);
    CHECK(j["order"] == "second");
    CHECK_FALSE(j.contains("beta_zero"));

    const auto potts = nlohmann::json::parse(run({"critical", "--q", "3", "--z", "2"}).out);
    CHECK(potts["beta_c"].get<double>() == doctest::Approx(2.772589).epsilon(1e-6));
    CHECK(potts["order"] == "first");
    CHECK(potts.contains("beta_zero"));

    const auto bad = run({"critical", "--q", "1.5", "--z", "2"});
    CHECK(bad.code == 2);
    CHECK_FALSE(bad.err.empty());
}

TEST_CASE("phase diagram") {
    const auto strip = run({"phase-diagram", "--q-grid", "2", "--z-grid", "2:4:0.5"});
    REQUIRE(strip.code == 0);
    const auto rows = csv(strip.out);
    CHECK(rows[0] == std::vector<std::string>{"q", "z", "beta_zero", "beta_one", "beta_c", "order"});
    REQUIRE(rows.size() == 6);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][2].empty());
        CHECK(rows[i][3] == rows[i][4]);
        CHECK(rows[i][5] == "second");
    }

    const auto q3 = csv(run({"phase-diagram", "--q-grid", "3", "--z-grid", "3:7:1"}).out);
    REQUIRE(q3.size() == 6);
    for (std::size_t i = 1; i < q3.size(); ++i) {
        CHECK(std::stod(q3[i][2]) < std::stod(q3[i][4]));
        CHECK(std::stod(q3[i][4]) < std::stod(q3[i][3]));
    }

    SUBCASE("row order does not depend on the thread count") {
        ::setenv("MFPOTTS_THREADS", "1", 1);
        const auto serial = run({"phase-diagram", "--q-grid", "2,3,4", "--z-grid", "2,3,5"}).out;
        ::setenv("MFPOTTS_THREADS", "4", 1);
        const auto parallel = run({"phase-diagram", "--q-grid", "2,3,4", "--z-grid", "2,3,5"}).out;
        ::unsetenv("MFPOTTS_THREADS");
        CHECK(serial == parallel);
    }

    CHECK(run({"phase-diagram", "--q-grid", "2,a", "--z-grid", "2"}).code == 2);
    CHECK(run({"phase-diagram", "--q-grid", "1", "--z-grid", "2"}).code == 2);
}

TEST_CASE("bifurcation") {
    const auto r = run({"bifurcation", "--q", "3", "--z", "2", "--beta-grid", "1,2.8,4"});
    REQUIRE(r.code == 0);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1][2] == "0");
    CHECK(rows[2][2] == "2");
    CHECK(rows[3][2] == "1");
    CHECK(std::stod(rows[2][3]) > 0.0);
}

TEST_CASE("landscape") {
    const auto r = run({"landscape", "--q", "3", "--z", "4", "--beta-grid", "3.8,9", "--u-grid", "0:1:0.25"});
    REQUIRE(r.code == 0);
    const auto blank = r.out.find("\n\n");
    REQUIRE(blank != std::string::npos);
    const auto curve = csv(r.out.substr(0, blank + 1));
    const auto table = csv(r.out.substr(blank + 2));
    CHECK(curve[0] == std::vector<std::string>{"beta", "u", "k", "k_prime"});
    REQUIRE(curve.size() == 11);
    CHECK(curve[5][1] == format_double(1 - 1e-9));
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (std::stod(curve[i][1]) == 0.0) {
            const double beta = std::stod(curve[i][0]);
            CHECK(std::stod(curve[i][2]) == doctest::Approx(-(beta / 4) * std::pow(3.0, -3)));
        }
    }
    CHECK(table[0] == std::vector<std::string>{"beta", "u", "k", "kind", "is_global"});
    int globals = 0;
    for (std::size_t i = 1; i < table.size(); ++i) globals += table[i][4] == "true";
    CHECK(globals == 2);
}

TEST_CASE("fuzzy and kernel") {
    const auto v = nlohmann::json::parse(run({"fuzzy", "--q", "5", "--z", "3", "--beta", "1", "--partition", "2,3"}).out);
    CHECK(v["threshold_beta"].get<double>() == critical_temperatures(3, 3).beta_c);
    CHECK(v["governing_class_size"] == 3);
    CHECK(v["non_gibbs"] == false);

    const auto safe = nlohmann::json::parse(run({"fuzzy", "--q", "5", "--z", "3", "--beta", "9", "--partition", "2,2,1"}).out);
    CHECK(safe["gibbs_for_all_beta"] == true);
    CHECK(safe["threshold_beta"].is_null());

    CHECK(run({"fuzzy", "--q", "5", "--z", "3", "--beta", "1", "--partition", "2,2"}).code == 2);
    CHECK(run({"fuzzy", "--q", "5", "--z", "3", "--beta", "1", "--partition", "5"}).code == 2);

    const auto row = run({"kernel", "--q", "3", "--z", "3", "--beta", "1", "--partition", "1,2", "--nu", "0.5,0.5"});
    REQUIRE(row.code == 0);
    const auto rj = nlohmann::json::parse(row.out);
    CHECK(rj["row"][0].get<double>() + rj["row"][1].get<double>() == doctest::Approx(1.0));

    const double beta = 1.2 * critical_temperatures(3, 3).beta_c;
    const auto verdict = nlohmann::json::parse(
        run({"fuzzy", "--q", "5", "--z", "3", "--beta", format_double(beta), "--partition", "2,3"}).out);
    REQUIRE(verdict["discontinuities"].size() == 1);
    CHECK(verdict["discontinuities"][0]["class"] == 2);
    const double nu = verdict["discontinuities"][0]["nu"];
    const auto at = run({"kernel", "--q", "5", "--z", "3", "--beta", format_double(beta), "--partition", "2,3", "--nu",
                         format_double(1 - nu) + "," + format_double(nu)});
    CHECK(at.code == 3);
    CHECK(at.err.find("class 2") != std::string::npos);
}

TEST_CASE("scheme") {
    const double bc25 = critical_temperatures(2, 5).beta_c, bc35 = critical_temperatures(3, 5).beta_c;
    const auto r = run({"scheme", "--file", data("q5_scheme.json"), "--beta", format_double(0.5 * (bc25 + bc35))});
    REQUIRE(r.code == 0);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == std::vector<std::string>{"t", "block_sizes", "r_star", "threshold", "status"});
    CHECK(rows[1][4] == "trivial_endpoint");
    CHECK(rows[2][4] == "non_gibbs");
    CHECK(rows[3][4] == "gibbs");
    CHECK(rows[4][4] == "non_gibbs");
    CHECK(rows[2][2] == "2");
    CHECK(rows[3][2] == "3");
    CHECK(rows[4][1] == "3;2");

    const auto binary = nlohmann::json::parse(
        run({"scheme", "--file", data("q8_binary.json"), "--beta", "0.5", "--format", "json"}).out);
    CHECK(binary["regular"] == true);
    CHECK(binary["regime"] == "stays_gibbs");
    for (const auto& pt : binary["points"]) CHECK(pt["status"] != "non_gibbs");

    const auto dir = std::filesystem::temp_directory_path();
    const auto bad = (dir / "mfpotts_bad_scheme.json").string();
    std::ofstream(bad) << R"({"q": 3, "partitions": [[[1],[2],[3]], [[1,2],[3]], [[1],[2,3]], [[1,2,3]]]})";
    const auto broken = run({"scheme", "--file", bad, "--beta", "1", "--z", "3"});
    CHECK(broken.code == 2);
    CHECK(broken.err.find("t = 2") != std::string::npos);
    std::ofstream(bad) << "not json";
    CHECK(run({"scheme", "--file", bad, "--beta", "1", "--z", "3"}).code == 2);
    CHECK(run({"scheme", "--file", "/nonexistent/scheme.json", "--beta", "1"}).code == 2);
    std::filesystem::remove(bad);
}

TEST_CASE("sample is reproducible") {
    const std::vector<std::string> args{"sample", "--N", "300", "--q", "3", "--z", "2", "--beta", "3.5",
                                        "--sweeps", "40", "--seed", "7"};
    const auto a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto rows = csv(a.out);
    CHECK(rows[0] == std::vector<std::string>{"sweep", "n_1", "n_2", "n_3"});
    REQUIRE(rows.size() == 41);
    CHECK(std::stoi(rows[1][1]) + std::stoi(rows[1][2]) + std::stoi(rows[1][3]) == 300);

    auto other = args;
    other.back() = "8";
    CHECK(run(other).out != a.out);
    CHECK(run({"sample", "--N", "0", "--q", "3", "--z", "2", "--beta", "1"}).code == 2);
    CHECK(run({"sample", "--N", "10", "--q", "2.5", "--z", "2", "--beta", "1"}).code == 2);
}

TEST_CASE("rcm and verify") {
    const auto r = run({"rcm", "--N", "100", "--z", "2", "--q", "1", "--lambda-grid", "0,0.5,2", "--samples", "30",
                        "--seed", "3"});
    REQUIRE(r.code == 0);
    const auto rows = csv(r.out);
    CHECK(rows[0] == std::vector<std::string>{"lambda", "p", "mean_max_fraction", "stderr"});
    REQUIRE(rows.size() == 4);
    CHECK(std::stod(rows[1][2]) == doctest::Approx(0.01));
    CHECK(run({"rcm", "--N", "5000", "--z", "3", "--q", "2", "--lambda-grid", "1", "--samples", "2"}).code == 2);

    const auto v = run({"verify", "--suite", "gradient,marginal"});
    CHECK(v.code == 0);
    CHECK(v.out.find("PASS gradient") != std::string::npos);
    CHECK(v.out.find("PASS marginal") != std::string::npos);
    CHECK(run({"verify", "--suite", "nope"}).code == 2);
    CHECK(run({"--max-states", "10", "verify", "--suite", "marginal"}).code == 2);
}

TEST_CASE("global flags and errors") {
    const auto path = (std::filesystem::temp_directory_path() / "mfpotts_cli_out.json").string();
    const auto r = run({"critical", "--q", "2", "--z", "3", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(nlohmann::json::parse(text.str())["beta_c"] == 2.0);
    std::filesystem::remove(path);

    const auto loose = nlohmann::json::parse(run({"--tol", "1e-3", "critical", "--q", "3", "--z", "2"}).out);
    CHECK(std::abs(loose["beta_c"].get<double>() - 4 * std::log(2.0)) <= 1e-3);

    CHECK(run({}).code == 2);
    CHECK(run({"critical", "--q", "3"}).code == 2);
    CHECK(run({"critical", "--q", "3", "--z", "2", "--bogus", "1"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}
