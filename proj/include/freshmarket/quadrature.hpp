#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace freshmarket {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    // Hard cap on recursion depth: 2^20 subintervals.
    int max_depth = 20;
};

namespace detail {

template <typename F>
double simpson(F&& f, double a, double fa, double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson_rec(F&& f, double a, double fa, double b, double fb,
                            double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson quadrature of f over [a, b] to the given relative tolerance.
template <typename F>
double integrate(F&& f, double a, double b, QuadratureOptions opts = {}) {
    if (!(b >= a)) throw std::domain_error("integrate: requires b >= a");
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = detail::simpson(f, a, fa, b, fb, m, fm);
    const double scale = std::max(std::abs(whole), (b - a) * std::max(std::abs(fa), std::abs(fb)));
    const double tol = opts.rel_tol * std::max(scale, 1e-300);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, opts.max_depth);
}

} // namespace freshmarket
