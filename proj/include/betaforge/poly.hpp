#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace betaforge {

/// Dense polynomial of degree <= 6, c[k] multiplying x^k.
struct Poly {
    std::array<double, 7> c{};

    double operator()(double x) const {
        double acc = 0.0;
        for (int k = 6; k >= 0; --k) acc = acc * x + c[k];
        return acc;
    }

    Poly deriv() const {
        Poly d;
        for (int k = 1; k <= 6; ++k) d.c[k - 1] = static_cast<double>(k) * c[k];
        return d;
    }

    int degree() const {
        for (int k = 6; k >= 1; --k)
            if (c[k] != 0.0) return k;
        return 0;
    }
};

namespace detail {

/// Exact interpolation of a degree < npts polynomial from its values at the
/// given nodes: Newton divided differences expanded to monomial form.
inline Poly interpolate_poly(const std::vector<double>& nodes,
                             const std::vector<double>& values) {
    const std::size_t n = nodes.size();
    std::vector<double> dd = values;  // divided-difference table, in place
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = n - 1; i >= level; --i)
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);

    // Horner-style expansion of the Newton form into monomials
    Poly p;
    for (std::size_t i = n; i-- > 0;) {
        for (int k = 6; k >= 1; --k) p.c[k] = p.c[k - 1] - nodes[i] * p.c[k];
        p.c[0] = dd[i] - nodes[i] * p.c[0];
    }
    return p;
}

/// All real roots of p on [lo, hi], located by sign scanning on a uniform
/// grid followed by bisection.  Intended for the low-degree well-separated
/// cases arising from conditional densities.
inline std::vector<double> real_roots_bisect(const Poly& p, double lo, double hi,
                                             int grid = 512, double tol = 1e-12) {
    std::vector<double> roots;
    double x0 = lo, f0 = p(lo);
    for (int i = 1; i <= grid; ++i) {
        const double x1 = lo + (hi - lo) * static_cast<double>(i) / grid;
        const double f1 = p(x1);
        if (f0 == 0.0) roots.push_back(x0);
        if ((f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 < 0.0)) {
            double a = x0, b = x1, fa = f0;
            for (int it = 0; it < 200 && b - a > tol; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = p(mid);
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    if (f0 == 0.0) roots.push_back(x0);
    return roots;
}

/// Cauchy-style bound on the magnitude of the real roots of p.
inline double root_bound(const Poly& p) {
    const int d = p.degree();
    if (d == 0) return 1.0;
    double m = 0.0;
    for (int k = 0; k < d; ++k) m = std::max(m, std::abs(p.c[k] / p.c[d]));
    return 1.0 + m;
}

}  // namespace detail

}  // namespace betaforge
