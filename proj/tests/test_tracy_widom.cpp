#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "betaforge/tracy_widom.hpp"

using namespace betaforge;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("gauss-legendre rules integrate polynomials exactly", "[tracy-widom]") {
    for (std::size_t m : {5ul, 16ul, 64ul}) {
        const QuadratureRule rule = gauss_legendre(m);
        double mass = 0.0;
        for (double w : rule.weights) mass += w;
        CHECK_THAT(mass, WithinRel(2.0, 1e-13));

        // moments of x^k on [-1, 1] up to degree 2m - 1
        for (std::size_t k = 1; k <= 2 * m - 1; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                acc += rule.weights[i] * std::pow(rule.nodes[i], static_cast<double>(k));
            const double exact = k % 2 == 1 ? 0.0 : 2.0 / (static_cast<double>(k) + 1.0);
            CHECK_THAT(acc, WithinAbs(exact, 1e-12));
        }
    }
}

TEST_CASE("F2 reproduces independently computed reference values", "[tracy-widom]") {
    // reference: Fredholm determinant evaluated with an unrelated
    // implementation (numpy/scipy) at order 400
    CHECK_THAT(tracy_widom2_cdf(-3.0, 80), WithinAbs(0.080319552939339, 1e-8));
    CHECK_THAT(tracy_widom2_cdf(-1.0, 80), WithinAbs(0.807214241999312, 1e-8));
    CHECK_THAT(tracy_widom2_cdf(0.0, 80), WithinAbs(0.969372828355270, 1e-8));
    CHECK_THAT(tracy_widom2_cdf(2.0, 80), WithinAbs(0.999887553698309, 1e-8));
}

TEST_CASE("F2 is monotone with the right tail limits", "[tracy-widom]") {
    double prev = -1.0;
    for (int i = 0; i <= 50; ++i) {
        const double s = -8.0 + 14.0 * i / 50.0;
        const double f = tracy_widom2_cdf(s);
        CHECK(f >= prev - 1e-12);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        prev = f;
    }
    CHECK(tracy_widom2_cdf(-10.0) <= 1e-6);
    CHECK(tracy_widom2_cdf(8.0) >= 1.0 - 1e-10);
}

TEST_CASE("self-convergence under order doubling", "[tracy-widom]") {
    for (double s : {-4.0, -2.0, 0.0, 2.0}) {
        const double coarse = tracy_widom2_cdf(s, 60);
        const double fine = tracy_widom2_cdf(s, 120);
        CHECK_THAT(coarse, WithinAbs(fine, 1e-8));
    }
}
