#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "betaforge/empirical.hpp"
#include "betaforge/ensembles.hpp"
#include "oracles.hpp"

using namespace betaforge;
using Catch::Matchers::WithinRel;

TEST_CASE("N = 1 ensembles reduce to known scalar laws", "[ensembles][statistical]") {
    const int n = 50000;

    SECTION("Hermite N=1 is a single normal variate") {
        RngStream rng(5001);
        const EnsembleSpec spec(HermiteEnsemble{0.0, 1.0}, 1, 3.7);
        std::vector<double> draws(n);
        for (double& d : draws) d = sample_ensemble(spec, rng).eigenvalues[0];
        CHECK(ks_distance(EmpiricalCDF(draws), [](double x) { return oracle::normal_cdf(x); }) <=
              0.01);
    }

    SECTION("Jacobi N=1 is a single Beta(p, q) variate") {
        RngStream rng(5002);
        const EnsembleSpec spec(JacobiEnsemble{2.0, 3.0}, 1, 1.3);
        std::vector<double> draws(n);
        for (double& d : draws) d = sample_ensemble(spec, rng).eigenvalues[0];
        CHECK(ks_distance(EmpiricalCDF(draws),
                          [](double x) { return oracle::betai(2.0, 3.0, x); }) <= 0.01);
    }
}

TEST_CASE("coefficient laws at small N", "[ensembles][statistical]") {
    const int n = 50000;

    SECTION("Hermite N=3, beta=2: b_1 ~ Gamma(2, sigma^2)") {
        RngStream rng(5003);
        const EnsembleSpec spec(HermiteEnsemble{0.0, 1.0}, 3, 2.0);
        std::vector<double> b1(n), a_all;
        a_all.reserve(3 * n);
        for (int i = 0; i < n; ++i) {
            const JacobiCoefficients j = sample_coefficients(spec, rng);
            b1[i] = j.b(0);
            for (double a : j.a()) a_all.push_back(a);
        }
        CHECK(ks_distance(EmpiricalCDF(b1), [](double x) { return oracle::gammap(2.0, x); }) <=
              0.01);
        CHECK(ks_distance(EmpiricalCDF(a_all), [](double x) { return oracle::normal_cdf(x); }) <=
              0.01);
    }

    SECTION("Laguerre N=2, k=1, theta=2: a_1 = xi_1 ~ Gamma(2, 2)") {
        RngStream rng(5004);
        const EnsembleSpec spec(LaguerreEnsemble{1.0, 2.0}, 2, 2.0);
        std::vector<double> a1(n);
        for (double& d : a1) d = sample_coefficients(spec, rng).a(0);
        CHECK(ks_distance(EmpiricalCDF(a1),
                          [](double x) { return oracle::gammap(2.0, x / 2.0); }) <= 0.01);
    }
}

TEST_CASE("support constraints of the classical spectra", "[ensembles][property]") {
    RngStream rng(5005);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t n = 1 + rng.next_u64() % 30;
        const double beta = 0.4 + 3.0 * rng.uniform01();

        const EnsembleSpec lag(LaguerreEnsemble{0.8, 1.7}, n, beta);
        for (double lam : sample_ensemble(lag, rng).eigenvalues) CHECK(lam > 0.0);

        const EnsembleSpec jac(JacobiEnsemble{0.7, 1.4}, n, beta);
        for (double lam : sample_ensemble(jac, rng).eigenvalues) {
            CHECK(lam > 0.0);
            CHECK(lam < 1.0);
        }
    }
}

TEST_CASE("sum of N=2 Hermite eigenvalues is N(0, 2)", "[ensembles][statistical]") {
    RngStream rng(5006);
    const EnsembleSpec spec(HermiteEnsemble{0.0, 1.0}, 2, 2.0);
    const int n = 10000;
    std::vector<double> sums(n);
    for (double& s : sums) {
        const SpectralSample e = sample_ensemble(spec, rng);
        s = e.eigenvalues[0] + e.eigenvalues[1];
    }
    CHECK(ks_distance(EmpiricalCDF(sums), [](double x) {
              return oracle::normal_cdf(x, 0.0, std::sqrt(2.0));
          }) <= 0.02);
}

TEST_CASE("lambda_max law does not depend on the stream id", "[ensembles][statistical]") {
    const EnsembleSpec spec(HermiteEnsemble{0.0, 1.0}, 12, 2.0);
    const int n = 1000;
    std::vector<double> batch_a(n), batch_b(n);
    for (int i = 0; i < n; ++i) {
        RngStream ra(606, static_cast<std::uint64_t>(i));
        RngStream rb(606, static_cast<std::uint64_t>(100000 + 7 * i));
        batch_a[i] = sample_ensemble(spec, ra).eigenvalues.back();
        batch_b[i] = sample_ensemble(spec, rb).eigenvalues.back();
    }
    // two-sample KS; 0.0872 rejects at p = 0.001 for n = m = 1000
    CHECK(ks_two_sample(EmpiricalCDF(batch_a), EmpiricalCDF(batch_b)) < 0.0872);
}

TEST_CASE("draws are deterministic given (spec, seed, stream)", "[ensembles]") {
    const EnsembleSpec spec(LaguerreEnsemble{1.5, 2.0}, 20, 2.5);
    RngStream r1(31415, 9), r2(31415, 9);
    const SpectralSample s1 = sample_ensemble(spec, r1);
    const SpectralSample s2 = sample_ensemble(spec, r2);
    CHECK(s1.eigenvalues == s2.eigenvalues);
}
