#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "betaforge/runner.hpp"

using namespace betaforge;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "betaforge_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(BETAFORGE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("classical run writes the documented artifacts", "[runner]") {
    RunConfig c;
    c.mode = RunConfig::Mode::classical;
    c.ensemble = "hermite";
    c.n = 50;
    c.beta = 2.0;
    c.chains = 3;
    c.seed = 42;
    c.out_dir = fresh_dir("classical").string();
    const RunSummary s = run(c);

    REQUIRE(fs::exists(s.eigenvalues_csv));
    REQUIRE(fs::exists(s.manifest_json));
    CHECK_FALSE(fs::exists(fs::path(c.out_dir) / "INCOMPLETE"));

    const EigenvalueTable table = read_eigenvalues_csv(s.eigenvalues_csv.string());
    REQUIRE(table.pooled_by_pass.count(0) == 1);
    CHECK(table.pooled_by_pass.at(0).size() == 3 * 50);
    CHECK(table.n == 50);
    CHECK(table.maxima_by_pass.at(0).size() == 3);
}

TEST_CASE("gibbs run records snapshots and a KS table", "[runner]") {
    RunConfig c;
    c.mode = RunConfig::Mode::gibbs;
    c.potential = PolynomialPotential{.g4 = 0.25};
    c.n = 30;
    c.beta = 2.0;
    c.passes = 4;
    c.chains = 8;
    c.snapshot_every = 2;
    c.seed = 7;
    c.rescale = true;
    c.target = "auto";
    c.out_dir = fresh_dir("gibbs").string();
    const RunSummary s = run(c);

    const EigenvalueTable table = read_eigenvalues_csv(s.eigenvalues_csv.string());
    REQUIRE(table.pooled_by_pass.size() == 2);  // passes 2 and 4
    CHECK(table.pooled_by_pass.at(2).size() == 8 * 30);
    CHECK(table.pooled_by_pass.at(4).size() == 8 * 30);

    REQUIRE(s.ks_by_pass.size() == 2);
    CHECK(s.ks_by_pass[0].first == 2);
    CHECK(s.ks_by_pass[1].first == 4);
    CHECK(s.ks_by_pass[1].second < 0.5);

    const std::string ks_text = slurp(s.ks_csv);
    CHECK(ks_text.rfind("pass,ks\n", 0) == 0);
}

TEST_CASE("runs are byte-identical across thread counts and reruns", "[runner]") {
    RunConfig c;
    c.mode = RunConfig::Mode::gibbs;
    c.potential = PolynomialPotential{.g2 = 0.3, .g4 = 0.25};
    c.n = 16;
    c.passes = 3;
    c.chains = 7;
    c.seed = 20240811;
    c.rescale = true;
    c.threads = 1;
    c.out_dir = fresh_dir("det1").string();
    run(c);

    RunConfig c2 = c;
    c2.threads = 4;
    c2.out_dir = fresh_dir("det2").string();
    run(c2);

    CHECK(slurp(fs::path(c.out_dir) / "eigenvalues.csv") ==
          slurp(fs::path(c2.out_dir) / "eigenvalues.csv"));

    // manifest round-trip
    std::ifstream mf(fs::path(c.out_dir) / "manifest.json");
    nlohmann::json j;
    mf >> j;
    RunConfig c3 = config_from_json(j);
    c3.out_dir = fresh_dir("det3").string();
    c3.threads = 2;
    run(c3);
    CHECK(slurp(fs::path(c.out_dir) / "eigenvalues.csv") ==
          slurp(fs::path(c3.out_dir) / "eigenvalues.csv"));
}

TEST_CASE("csv parser reports the offending line", "[runner]") {
    const fs::path dir = fresh_dir("parse");
    const fs::path bad = dir / "bad.csv";
    {
        std::ofstream f(bad);
        f << "chain,pass,index,value\n";
        f << "0,0,0,1.5\n";
        f << "0,0,1\n";
    }
    try {
        read_eigenvalues_csv(bad.string());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
}

TEST_CASE("single-sample tracy-widom statistic", "[runner]") {
    const fs::path dir = fresh_dir("tw1");
    const fs::path csv = dir / "one.csv";
    const double value = 2.03;  // a single rescaled-semicircle eigenvalue
    {
        std::ofstream f(csv);
        f << "chain,pass,index,value\n0,0,0," << value << "\n";
    }
    const EigenvalueTable table = read_eigenvalues_csv(csv.string());
    const EquilibriumMeasure sc = equilibrium_semicircle();
    const nlohmann::json out = stats_tw(table, sc);
    const double s = edge_rescale(value, 1, sc);
    const double f2 = tracy_widom2_cdf(s);
    const double expected = std::max(f2, 1.0 - f2);
    CHECK(std::abs(out["by_pass"][0]["ks_tw"].get<double>() - expected) < 1e-12);
}

TEST_CASE("BETAFORGE_THREADS is the fallback worker count", "[runner]") {
    setenv("BETAFORGE_THREADS", "2", 1);
    RunConfig c;
    c.mode = RunConfig::Mode::classical;
    c.ensemble = "jacobi";
    c.n = 8;
    c.chains = 4;
    c.seed = 5;
    c.threads = 0;  // defer to the environment
    c.out_dir = fresh_dir("env").string();
    const RunSummary s = run(c);
    unsetenv("BETAFORGE_THREADS");
    CHECK(read_eigenvalues_csv(s.eigenvalues_csv.string()).pooled_by_pass.at(0).size() == 32);
}

TEST_CASE("unwritable output path raises IoError", "[runner]") {
    const fs::path dir = fresh_dir("iofail");
    const fs::path blocker = dir / "taken";
    {
        std::ofstream f(blocker);
        f << "x";
    }
    RunConfig c;
    c.mode = RunConfig::Mode::classical;
    c.ensemble = "hermite";
    c.n = 4;
    c.out_dir = (blocker / "sub").string();  // parent is a regular file
    CHECK_THROWS_AS(run(c), IoError);
}

TEST_CASE("config validation catches bad fields", "[runner]") {
    RunConfig c;
    c.mode = RunConfig::Mode::classical;
    c.ensemble = "circular";
    c.out_dir = fresh_dir("badcfg").string();
    CHECK_THROWS_AS(run(c), ConfigError);

    RunConfig g;
    g.mode = RunConfig::Mode::gibbs;
    g.potential = PolynomialPotential{.g4 = 0.25};
    g.target = "auto";  // without rescale
    g.out_dir = fresh_dir("badcfg2").string();
    CHECK_THROWS_AS(run(g), ConfigError);
}

TEST_CASE("cli end to end: classical, stats, rerun", "[runner][cli]") {
    const fs::path dir = fresh_dir("cli");
    const std::string out1 = (dir / "run1").string();
    REQUIRE(run_cli("classical --ensemble hermite --n 200 --beta 2 --chains 2 --seed 42 "
                    "--rescale --target semicircle --out " +
                    out1) == 0);
    REQUIRE(fs::exists(fs::path(out1) / "eigenvalues.csv"));
    REQUIRE(fs::exists(fs::path(out1) / "manifest.json"));
    REQUIRE(fs::exists(fs::path(out1) / "ks_by_pass.csv"));

    // stats ks against the same target: exact draws sit close to the limit
    REQUIRE(run_cli("stats ks --input " + out1 + "/eigenvalues.csv --target semicircle --out " +
                    (dir / "stats").string()) == 0);
    REQUIRE(fs::exists(dir / "stats" / "ks_by_pass.csv"));
    {
        std::ifstream ks(dir / "stats" / "ks_by_pass.csv");
        std::string header, row;
        std::getline(ks, header);
        REQUIRE(std::getline(ks, row));
        const double value = std::stod(row.substr(row.find(',') + 1));
        CHECK(value <= 0.05);
    }

    // stats tw writes a summary
    REQUIRE(run_cli("stats tw --input " + out1 +
                    "/eigenvalues.csv --target semicircle --quad-order 40 --out " +
                    (dir / "stats").string()) == 0);
    REQUIRE(fs::exists(dir / "stats" / "tw_summary.json"));

    // rerun reproduces the bytes
    const std::string out2 = (dir / "run2").string();
    REQUIRE(run_cli("rerun --manifest " + out1 + "/manifest.json --threads 2 --out " + out2) == 0);
    CHECK(slurp(fs::path(out1) / "eigenvalues.csv") == slurp(fs::path(out2) / "eigenvalues.csv"));

    // identical command twice: identical bytes
    const std::string out3 = (dir / "run3").string();
    REQUIRE(run_cli("classical --ensemble hermite --n 200 --beta 2 --chains 2 --seed 42 "
                    "--rescale --target semicircle --out " +
                    out3) == 0);
    CHECK(slurp(fs::path(out1) / "eigenvalues.csv") == slurp(fs::path(out3) / "eigenvalues.csv"));

    // config errors surface as nonzero exit
    CHECK(run_cli("classical --ensemble circular --n 5 --out " + (dir / "x").string()) != 0);
    CHECK(run_cli("gibbs --potential poly:g5=1 --n 5 --passes 1 --out " + (dir / "y").string()) !=
          0);
}

TEST_CASE("cli gibbs with auto target emits decreasing KS", "[runner][cli][statistical]") {
    const fs::path dir = fresh_dir("cli_gibbs");
    const std::string out = (dir / "run").string();
    REQUIRE(run_cli("gibbs --potential quartic:g4=0.25 --rescale --n 60 --beta 2 --passes 8 "
                    "--chains 20 --snapshot-every 1 --seed 7 --target auto --out " +
                    out) == 0);
    const EigenvalueTable table = read_eigenvalues_csv(out + "/eigenvalues.csv");
    REQUIRE(table.pooled_by_pass.size() == 8);

    std::ifstream ks(out + "/ks_by_pass.csv");
    std::string header;
    std::getline(ks, header);
    double first_ks = -1.0, last_ks = -1.0;
    int pass;
    char comma;
    double value;
    std::string line;
    while (std::getline(ks, line)) {
        std::istringstream row(line);
        row >> pass >> comma >> value;
        if (first_ks < 0.0) first_ks = value;
        last_ks = value;
    }
    CHECK(first_ks > last_ks);  // burn-in decays
    CHECK(last_ks < 0.1);
}
