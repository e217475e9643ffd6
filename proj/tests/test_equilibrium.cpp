#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "betaforge/empirical.hpp"
#include "betaforge/ensembles.hpp"
#include "betaforge/equilibrium.hpp"
#include "oracles.hpp"

using namespace betaforge;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// mass, cdf consistency and cdf' = pdf checks shared by all measures
void check_measure_consistency(const EquilibriumMeasure& eq, double pdf_tol = 1e-6) {
    double mass = 0.0;
    for (const Interval& band : eq.support) {
        // x = mid + half sin(theta) removes the square-root edge behavior
        const double mid = 0.5 * (band.lo + band.hi), half = 0.5 * (band.hi - band.lo);
        mass += oracle::simpson(
            [&](double theta) {
                return eq.pdf(mid + half * std::sin(theta)) * half * std::cos(theta);
            },
            -std::numbers::pi / 2, std::numbers::pi / 2, 1e-10, 24);
    }
    CHECK_THAT(mass, WithinAbs(1.0, 1e-8));

    CHECK_THAT(eq.cdf(eq.support.front().lo), WithinAbs(0.0, 1e-8));
    CHECK_THAT(eq.cdf(eq.support.back().hi), WithinAbs(1.0, 1e-8));

    for (const Interval& band : eq.support) {
        const double len = band.hi - band.lo;
        for (int i = 1; i < 12; ++i) {
            const double x = band.lo + len * i / 12.0;
            const double h = 1e-5 * len;
            const double fd = (eq.cdf(x + h) - eq.cdf(x - h)) / (2.0 * h);
            CHECK_THAT(fd, WithinAbs(eq.pdf(x), pdf_tol * std::max(1.0, eq.pdf(x))));
        }
        // monotone
        double prev = eq.cdf(band.lo);
        for (int i = 1; i <= 24; ++i) {
            const double f = eq.cdf(band.lo + len * i / 24.0);
            CHECK(f >= prev - 1e-14);
            prev = f;
        }
    }
}

// principal-value residual of the equilibrium condition at interior x
double pv_residual(const EquilibriumMeasure& eq, const PolynomialPotential& v, double x) {
    double pv = 0.0;
    const double rho_x = eq.pdf(x);
    for (const Interval& band : eq.support) {
        const int n = 200001;
        const double dx = (band.hi - band.lo) / (n - 1);
        // composite Simpson with the singularity subtracted inside the band
        // that contains x
        const bool singular = x > band.lo && x < band.hi;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double y = band.lo + i * dx + 0.5 * dx * 1e-3;  // offset to dodge y == x
            const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            const double num = singular ? eq.pdf(y) - rho_x : eq.pdf(y);
            acc += w * num / (x - y);
        }
        pv += acc * dx / 3.0;
        if (singular) pv += rho_x * std::log((x - band.lo) / (band.hi - x));
    }
    return pv - 0.5 * v.deriv(x);
}

}  // namespace

TEST_CASE("classical limits: closed-form facts", "[equilibrium]") {
    const EquilibriumMeasure sc = equilibrium_semicircle();
    CHECK_THAT(sc.pdf(0.0), WithinRel(1.0 / std::numbers::pi, 1e-14));
    CHECK(sc.support.front().lo == -2.0);
    CHECK(sc.support.front().hi == 2.0);
    CHECK_THAT(*sc.edge_coefficient, WithinRel(1.0 / std::numbers::pi, 1e-14));
    check_measure_consistency(sc);

    const EquilibriumMeasure as = equilibrium_arcsine();
    CHECK_THAT(as.cdf(0.5), WithinRel(0.5, 1e-14));
    CHECK_FALSE(as.edge_coefficient.has_value());
    check_measure_consistency(as);

    const EquilibriumMeasure mp = equilibrium_marchenko_pastur(1.0);
    CHECK_THAT(mp.right_edge, WithinRel(4.0, 1e-14));
    check_measure_consistency(mp);
    CHECK_THAT(*mp.edge_coefficient, WithinRel(fit_edge_coefficient(mp), 0.02));

    const EquilibriumMeasure mp6 = equilibrium_marchenko_pastur(0.6);
    check_measure_consistency(mp6);
    CHECK_THAT(*mp6.edge_coefficient, WithinRel(fit_edge_coefficient(mp6), 0.02));
}

TEST_CASE("solver recovers the semicircle from the quadratic potential", "[equilibrium]") {
    const EquilibriumMeasure eq = equilibrium_polynomial({.g2 = 0.5});
    CHECK_THAT(eq.support.front().lo, WithinAbs(-2.0, 1e-8));
    CHECK_THAT(eq.support.front().hi, WithinAbs(2.0, 1e-8));
    const EquilibriumMeasure sc = equilibrium_semicircle();
    for (int i = 0; i <= 50; ++i) {
        const double x = -2.0 + 4.0 * i / 50.0;
        CHECK_THAT(eq.pdf(x), WithinAbs(sc.pdf(x), 1e-8));
    }
    // the polynomial factor is the constant 1/(2 pi)
    CHECK_THAT(eq.pdf(0.3) / std::sqrt((2.0 - 0.3) * (0.3 + 2.0)),
               WithinRel(1.0 / (2.0 * std::numbers::pi), 1e-8));
    CHECK_THAT(*eq.edge_coefficient, WithinRel(1.0 / std::numbers::pi, 1e-8));
}

TEST_CASE("pure quartic equilibrium satisfies the singular equation", "[equilibrium]") {
    const PolynomialPotential v{.g4 = 0.25};
    const EquilibriumMeasure eq = equilibrium_polynomial(v);
    check_measure_consistency(eq);

    const Interval band = eq.support.front();
    CHECK_THAT(band.hi, WithinAbs(-band.lo, 1e-10));
    for (int i = 1; i < 100; ++i) {
        const double x = band.lo + (band.hi - band.lo) * i / 100.0;
        CHECK_THAT(pv_residual(eq, v, x), WithinAbs(0.0, 1e-6));
    }
    // the 2%-band least-squares fit carries a few-percent bias here because
    // the density factor still varies across the band
    CHECK_THAT(*eq.edge_coefficient, WithinRel(fit_edge_coefficient(eq), 0.05));
    const double near = band.hi - 1e-9;
    CHECK_THAT(*eq.edge_coefficient,
               WithinRel(eq.pdf(near) / std::sqrt(band.hi - near), 1e-4));
}

TEST_CASE("pure sextic equilibrium satisfies the singular equation", "[equilibrium]") {
    const PolynomialPotential v{.g6 = 1.0 / 6.0};
    const EquilibriumMeasure eq = equilibrium_polynomial(v);
    check_measure_consistency(eq);
    const Interval band = eq.support.front();
    for (int i = 1; i < 40; ++i) {
        const double x = band.lo + (band.hi - band.lo) * i / 40.0;
        CHECK_THAT(pv_residual(eq, v, x), WithinAbs(0.0, 1e-6));
    }
}

TEST_CASE("two-cut quartic splits the support symmetrically", "[equilibrium]") {
    const PolynomialPotential v{.g2 = -1.25, .g4 = 0.25};
    const EquilibriumMeasure eq = equilibrium_polynomial(v);
    REQUIRE(eq.support.size() == 2);
    // z-problem solves m = -2 g2 = 2.5, s = 2: bands +-[sqrt(1/2), sqrt(9/2)]
    CHECK_THAT(eq.support[1].lo, WithinAbs(std::sqrt(0.5), 1e-8));
    CHECK_THAT(eq.support[1].hi, WithinAbs(std::sqrt(4.5), 1e-8));
    CHECK_THAT(eq.support[0].lo, WithinAbs(-std::sqrt(4.5), 1e-8));
    check_measure_consistency(eq);

    for (const double x : {-1.9, -1.2, 0.9, 1.4, 2.0}) {
        CHECK_THAT(pv_residual(eq, v, x), WithinAbs(0.0, 1e-6));
    }
    CHECK_THAT(*eq.edge_coefficient, WithinRel(fit_edge_coefficient(eq), 0.02));
}

TEST_CASE("sextic two-cut equilibrium", "[equilibrium]") {
    const PolynomialPotential v{.g2 = -2.0, .g6 = 1.0 / 6.0};
    const EquilibriumMeasure eq = equilibrium_polynomial(v);
    REQUIRE(eq.support.size() == 2);
    check_measure_consistency(eq);
    for (const double x : {-1.6, -1.1, 1.0, 1.3, 1.65}) {
        CHECK_THAT(pv_residual(eq, v, x), WithinAbs(0.0, 1e-6));
    }
    CHECK_THAT(*eq.edge_coefficient, WithinRel(fit_edge_coefficient(eq), 0.05));
}

TEST_CASE("asymmetric quartic from the one-cut family", "[equilibrium]") {
    // V = x^4/20 - (4/15) x^3 + x^2/5 + (8/5) x
    const PolynomialPotential v{.g1 = 1.6, .g2 = 0.2, .g3 = -4.0 / 15.0, .g4 = 0.05};
    const EquilibriumMeasure eq = equilibrium_polynomial(v);
    REQUIRE(eq.support.size() == 1);
    check_measure_consistency(eq);
    const Interval band = eq.support.front();
    for (int i = 1; i < 40; ++i) {
        const double x = band.lo + (band.hi - band.lo) * i / 40.0;
        CHECK_THAT(pv_residual(eq, v, x), WithinAbs(0.0, 1e-6));
    }
}

TEST_CASE("unsupported potentials are rejected", "[equilibrium]") {
    // deep double well with a cubic tilt: asymmetric two-cut
    const PolynomialPotential v{.g2 = -4.0, .g3 = 0.03, .g4 = 0.25};
    CHECK_THROWS_AS(equilibrium_polynomial(v), UnsupportedPotential);
}

TEST_CASE("edge rescaling constants", "[equilibrium]") {
    const EquilibriumMeasure sc = equilibrium_semicircle();
    // (pi c)^(2/3) = 1 for the semicircle
    CHECK_THAT(edge_rescale(2.5, 100, sc), WithinRel(0.5 * std::pow(100.0, 2.0 / 3.0), 1e-12));
    CHECK(edge_rescale(sc.right_edge, 50, sc) == 0.0);

    // LUE square case: (pi c)^(2/3) = 4^(-2/3)
    const EquilibriumMeasure mp = equilibrium_marchenko_pastur(1.0);
    const double scale = std::pow(std::numbers::pi * *mp.edge_coefficient, 2.0 / 3.0);
    CHECK_THAT(scale, WithinRel(std::pow(4.0, -2.0 / 3.0), 1e-10));

    CHECK_THROWS_AS(edge_rescale(1.0, 10, equilibrium_arcsine()), NoSoftEdge);
}

TEST_CASE("classical histograms match their limits", "[equilibrium][statistical]") {
    const std::size_t n = 2000;
    RngStream rng(432101);

    // rescaled Hermite vs semicircle
    const EnsembleSpec spec(HermiteEnsemble{0.0, 1.0}, n, 2.0);
    SpectralSample s = sample_ensemble(spec, rng);
    const double scale = 1.0 / std::sqrt(0.5 * 2.0 * static_cast<double>(n));
    for (double& lam : s.eigenvalues) lam *= scale;
    const EquilibriumMeasure sc = equilibrium_semicircle();
    CHECK(ks_distance(EmpiricalCDF(s.eigenvalues), sc.cdf) <= 0.05);
}
