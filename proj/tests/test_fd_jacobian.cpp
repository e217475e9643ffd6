#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "betaforge/ensembles.hpp"
#include "betaforge/fd.hpp"

using namespace betaforge;
using Catch::Matchers::WithinRel;

namespace {

AtomicMeasure random_measure(std::size_t n, RngStream& rng) {
    const EnsembleSpec spec(HermiteEnsemble{}, n, 2.0);
    const SpectralSample s = eig_with_weights(sample_coefficients(spec, rng));
    return AtomicMeasure(s.eigenvalues, *s.weights);
}

}  // namespace

TEST_CASE("favard jacobian: N = 1 map is the identity", "[fd]") {
    CHECK_THAT(favard_jacobian_fd(AtomicMeasure({0.3}, {1.0}), 1e-5), WithinRel(1.0, 1e-8));
}

TEST_CASE("favard jacobian matches prod(1/b) prod(w) on a frozen case", "[fd]") {
    const AtomicMeasure mu({1.0, -1.0}, {0.5, 0.5});
    // coefficients a = (0,0), b = (1): formula gives 1 * 1/4
    CHECK_THAT(favard_jacobian_fd(mu, 1e-5), WithinRel(0.25, 1e-3));
}

TEST_CASE("favard jacobian matches the closed form on random draws", "[fd][property]") {
    RngStream rng(481516);
    for (int rep = 0; rep < 12; ++rep) {
        const std::size_t n = 2 + rng.next_u64() % 3;  // N in 2..4
        const AtomicMeasure mu = random_measure(n, rng);
        const JacobiCoefficients j = stieltjes_from_atoms(mu);

        double expected = 1.0;
        for (std::size_t i = 0; i + 1 < n; ++i) expected /= j.b(i);
        for (double w : mu.weights()) expected *= w;

        CHECK_THAT(favard_jacobian_fd(mu, 1e-5), WithinRel(expected, 1e-3));
    }
}

TEST_CASE("xi and canonical-moment maps have triangular jacobians", "[fd][property]") {
    RngStream rng(99124);
    for (int rep = 0; rep < 12; ++rep) {
        const std::size_t n = 2 + rng.next_u64() % 3;

        // d(a,b)/d(xi) = prod xi_{2i-1}, i = 1..N-1
        std::vector<double> xi(2 * n - 1);
        for (double& x : xi) x = 0.2 + rng.gamma(2.0, 0.4);
        auto xi_map = [n](const std::vector<double>& v) {
            const JacobiCoefficients j = xi_to_ab(XiParams(v));
            std::vector<double> out(2 * n - 1);
            for (std::size_t i = 0; i < n; ++i) out[i] = j.a(i);
            for (std::size_t i = 0; i + 1 < n; ++i) out[n + i] = j.b(i);
            return out;
        };
        double expected = 1.0;
        for (std::size_t i = 0; i + 1 < n; ++i) expected *= xi[2 * i];
        CHECK_THAT(fd_jacobian_determinant(xi_map, xi, 1e-6), WithinRel(expected, 1e-3));

        // d(xi)/d(c) = prod (1 - c_n), n = 1..2N-2
        std::vector<double> c(2 * n - 1);
        for (double& x : c) x = 0.1 + 0.8 * rng.uniform01();
        auto c_map = [](const std::vector<double>& v) {
            return c_to_xi(CanonicalMoments(v)).xi;
        };
        double expected_c = 1.0;
        for (std::size_t i = 0; i + 2 < 2 * n; ++i) expected_c *= 1.0 - c[i];
        CHECK_THAT(fd_jacobian_determinant(c_map, c, 1e-6), WithinRel(expected_c, 1e-3));
    }
}
