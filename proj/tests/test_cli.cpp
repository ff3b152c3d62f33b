#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "lcade/cli.hpp"

using namespace lcade;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
    fs::path dir = fs::temp_directory_path() / "lcade_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

int run_quiet(std::vector<std::string> args, std::string* err = nullptr) {
    std::ostringstream diag;
    int code = cli::run(std::move(args), diag);
    if (err) *err = diag.str();
    return code;
}

}  // namespace

TEST_CASE("exit codes") {
    CHECK(run_quiet({"analyze", "2x[-1]+2x[0]+3x[1] % 4", "--out", "/dev/null"}) == 0);
    CHECK(run_quiet({"analyze", "2x[0] % 1", "--out", "/dev/null"}) == 1);   // bad modulus
    CHECK(run_quiet({"invert", "1x[-1]+1x[1] % 2"}) == 1);                   // not invertible
    CHECK(run_quiet({"bogus"}) == 2);                                        // unknown subcommand
    CHECK(run_quiet({"tde"}) == 2);                                          // missing rule
    CHECK(run_quiet({}) == 2);
    CHECK(run_quiet({"markov", "--matrix", "/nonexistent.json"}) == 1);
}

TEST_CASE("analyze report fields") {
    fs::path dir = test_dir();
    fs::path out = dir / "report.json";
    REQUIRE(run_quiet({"analyze", "2x[-1]+2x[0]+3x[1] % 4", "--out", out.string()}) == 0);
    json j = json::parse(slurp(out));
    CHECK(j["modulus"] == 4);
    CHECK(j["factors"][0]["p"] == 2);
    CHECK(j["factors"][0]["k"] == 2);
    CHECK(j["invertible"] == true);
    CHECK(j["inverse"] == "2x[-3]+2x[-2]+3x[-1] % 4");
    CHECK(j["permutivity"]["leftmost"] == false);
    CHECK(j["permutivity"]["rightmost"] == true);
    CHECK(j["permutivity"]["factors"][0]["P"] == json::array({0, 1}));
}

TEST_CASE("tde artifacts and determinism") {
    fs::path dir = test_dir();
    auto run_once = [&](const std::string& tag) {
        std::vector<std::string> args{
            "tde", "2x[-3]+3x[-2]+5x[-1]+30x[0]+3x[1]+2x[2]+5x[3] % 30",
            "--samples", "721",
            "--csv", (dir / ("curve" + tag + ".csv")).string(),
            "--svg", (dir / ("curve" + tag + ".svg")).string(),
            "--json", (dir / ("curve" + tag + ".json")).string(),
            "--sectors", (dir / ("sectors" + tag + ".json")).string()};
        REQUIRE(run_quiet(args) == 0);
    };
    run_once("A");
    run_once("B");
    CHECK(slurp(dir / "curveA.csv") == slurp(dir / "curveB.csv"));
    CHECK(slurp(dir / "curveA.svg") == slurp(dir / "curveB.svg"));
    CHECK(slurp(dir / "curveA.json") == slurp(dir / "curveB.json"));
    CHECK(slurp(dir / "sectorsA.json") == slurp(dir / "sectorsB.json"));

    std::string csv = slurp(dir / "curveA.csv");
    CHECK(csv.substr(0, 14) == "theta,entropy\n");
    CHECK(csv.find("\r\n") == std::string::npos);
    // 721 grid rows + 4 breakpoints + header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 726);

    json sectors = json::parse(slurp(dir / "sectorsA.json"));
    CHECK(sectors.size() == 5);
}

TEST_CASE("mtde csv covers the full circle with boundary rows") {
    fs::path dir = test_dir();
    fs::path csv_path = dir / "mtde.csv";
    REQUIRE(run_quiet({"mtde", "12x[-2]+3x[-1]+5x[0]+4x[1]+1x[2]+21x[3] % 23", "--csv",
                       csv_path.string()}) == 0);
    std::string csv = slurp(csv_path);
    CHECK(csv.find("0.463647609001") != std::string::npos);  // arccot 2
    CHECK(csv.find("2.81984209919") != std::string::npos);   // arccot -3
    CHECK(csv.find("6.28318530718") != std::string::npos);   // 2 pi
}

TEST_CASE("markov subcommand renders exact rationals") {
    fs::path dir = test_dir();
    fs::path mpath = dir / "m4.json";
    std::ofstream(mpath) << fixtures::kMatrix4Json;
    fs::path out = dir / "markov.json";
    REQUIRE(run_quiet({"markov", "--matrix", mpath.string(), "--out", out.string()}) == 0);
    json j = json::parse(slurp(out));
    CHECK(j["exact"] == true);
    CHECK(j["irreducible"] == true);
    CHECK(j["stationary"]["entries"] ==
          json::array({"1/113", "4/113", "56/113", "52/113"}));
    CHECK(j["directional"][0]["b"] == 1);
    double h0 = std::log(2.0);
    double h1 = 0.25 * std::log(8.0) + 0.75 * std::log(4.0 / 3.0);
    double h2 = 0.125 * std::log(16.0) + 0.875 * std::log(8.0 / 7.0);
    double rate = (h0 + 4 * h1 + 56 * h2) / 113.0;
    CHECK(j["entropy_rate"].get<double>() == doctest::Approx(rate).epsilon(1e-12));
}

TEST_CASE("reducible matrix warns on the diagnostic stream") {
    fs::path dir = test_dir();
    fs::path mpath = dir / "red.json";
    std::ofstream(mpath) << R"({"n":2, "rows":[["1","0"],["0","1"]]})";
    std::string err;
    REQUIRE(run_quiet({"markov", "--matrix", mpath.string(), "--out", "/dev/null"}, &err) == 0);
    CHECK(err.find("reducible") != std::string::npos);
}

TEST_CASE("bounds subcommand") {
    fs::path dir = test_dir();
    fs::path pivec = dir / "pi.json";
    std::ofstream(pivec) << fixtures::kBernoulli4Json;
    fs::path mpath = dir / "m4.json";
    std::ofstream(mpath) << fixtures::kMatrix4Json;
    fs::path out = dir / "bounds.json";
    REQUIRE(run_quiet({"bounds", "2x[-1]+2x[0]+3x[1] % 4", "--pi", pivec.string(), "--matrix",
                       mpath.string(), "-q", "2", "--out", out.string()}) == 0);
    json j = json::parse(slurp(out));
    CHECK(j["bernoulli"]["bound"].get<double>() ==
          doctest::Approx(7.0 * std::log(2.0)).epsilon(1e-12));
    double h0 = std::log(2.0);
    double h1 = 0.25 * std::log(8.0) + 0.75 * std::log(4.0 / 3.0);
    double h2 = 0.125 * std::log(16.0) + 0.875 * std::log(8.0 / 7.0);
    double rate = (h0 + 4 * h1 + 56 * h2) / 113.0;
    CHECK(j["markov"]["bound"].get<double>() == doctest::Approx(4 * rate).epsilon(1e-10));
    CHECK(run_quiet({"bounds", "1x[0] % 4"}) == 1);  // no measure given
}

TEST_CASE("estimate subcommand is deterministic under a fixed seed") {
    fs::path dir = test_dir();
    fs::path out1 = dir / "est1.json", out2 = dir / "est2.json";
    std::vector<std::string> base{"estimate", "1x[-1]+1x[1] % 2", "--theta", "1.5707963",
                                  "--half-width", "2", "--rows", "4", "--mode", "sampled",
                                  "--seed", "12345", "--budget", "3000"};
    auto args1 = base;
    args1.push_back("--out");
    args1.push_back(out1.string());
    auto args2 = base;
    args2.push_back("--out");
    args2.push_back(out2.string());
    REQUIRE(run_quiet(args1) == 0);
    REQUIRE(run_quiet(args2) == 0);
    CHECK(slurp(out1) == slurp(out2));
    json j = json::parse(slurp(out1));
    CHECK(j["mode"] == "sampled");
    CHECK(j["count"].get<u64>() > 0);
    CHECK(j["count"].get<u64>() <= 8192);
}

TEST_CASE("log base flag rescales outputs") {
    fs::path dir = test_dir();
    fs::path out_e = dir / "e.json", out_2 = dir / "b2.json";
    REQUIRE(run_quiet({"analyze", "3x[-4]+2x[-3]+3x[2]+4x[3] % 5", "--out", out_e.string()}) == 0);
    REQUIRE(run_quiet({"analyze", "3x[-4]+2x[-3]+3x[2]+4x[3] % 5", "--log-base", "2", "--out",
                       out_2.string()}) == 0);
    double nats = json::parse(slurp(out_e))["topological_entropy"].get<double>();
    double bits = json::parse(slurp(out_2))["topological_entropy"].get<double>();
    CHECK(bits * std::numbers::ln2 == doctest::Approx(nats).epsilon(1e-12));
    CHECK(run_quiet({"analyze", "1x[0] % 2", "--log-base", "3", "--out", "/dev/null"}) == 1);
}

TEST_CASE("output directory environment variable") {
    fs::path dir = test_dir();
    setenv("LCADE_OUT_DIR", dir.c_str(), 1);
    REQUIRE(run_quiet({"analyze", "1x[0] % 5", "--out", "env_report.json"}) == 0);
    unsetenv("LCADE_OUT_DIR");
    CHECK(fs::exists(dir / "env_report.json"));
}
