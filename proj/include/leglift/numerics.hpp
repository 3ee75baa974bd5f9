#pragma once

#include <functional>

#include "types.hpp"

namespace leglift {

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature. Integrands here are smooth trigonometric
// expressions, so the classic recursive scheme with the /15 error estimate
// converges in a few levels; max_depth guards user-supplied curves.

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double fa,
                      double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double fa, double b, double fb, double m, double fm,
                                   double whole, double tol, int depth, int max_depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, fa, m, fm, lm, flm);
    double right = simpson(f, m, fm, b, fb, rm, frm);
    double err = left + right - whole;
    if (std::fabs(err) <= 15.0 * tol) return left + right + err / 15.0;
    if (depth >= max_depth)
        throw quadrature_error("adaptive quadrature did not converge at depth " +
                               std::to_string(depth));
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1,
                                max_depth) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1,
                                max_depth);
}

}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int max_depth) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    double whole = detail::simpson(f, a, fa, b, fb, m, fm);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 0, max_depth);
}

// ---------------------------------------------------------------------------
// Path derivatives. 5-point central stencil (4th order); the stencil shifts
// rather than shrinks near the ends of [lo, hi], which keeps the order.

inline CVec path_derivative(const std::function<CVec(double)>& p, double u, double h,
                            double lo, double hi) {
    double c = u;
    if (c - 2 * h < lo) c = lo + 2 * h;
    if (c + 2 * h > hi) c = hi - 2 * h;
    if (c - 2 * h < lo) {  // interval shorter than the stencil
        CVec a = p(lo), b = p(hi);
        CVec d(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) d[k] = (b[k] - a[k]) / (hi - lo);
        return d;
    }
    // differentiate the degree-4 interpolant on the (possibly shifted) stencil at u
    CVec f0 = p(c - 2 * h), f1 = p(c - h), f2 = p(c), f3 = p(c + h), f4 = p(c + 2 * h);
    double s = (u - c) / h;  // nodes sit at s = -2..2
    auto dlagrange = [&](int j) {
        double num = 0.0;
        for (int m = 0; m < 5; ++m) {
            if (m == j) continue;
            double term = 1.0;
            for (int i = 0; i < 5; ++i) {
                if (i == j || i == m) continue;
                term *= (s - (i - 2)) / double(j - i);
            }
            term /= double(j - m);
            num += term;
        }
        return num / h;
    };
    CVec d(f2.size(), Complex(0.0, 0.0));
    const CVec* fs[5] = {&f0, &f1, &f2, &f3, &f4};
    for (int j = 0; j < 5; ++j) {
        double w = dlagrange(j);
        for (std::size_t k = 0; k < d.size(); ++k) d[k] += w * (*fs[j])[k];
    }
    return d;
}

// ---------------------------------------------------------------------------
// Directional derivative of a map R^m -> C^n by central differences, with an
// optional Richardson level for high-curvature inputs.

inline CVec directional_derivative(const std::function<CVec(const Param&)>& f,
                                   const Param& x, const Param& dir, double h,
                                   bool richardson = false) {
    auto central = [&](double step) {
        Param xp = x, xm = x;
        for (std::size_t i = 0; i < x.size(); ++i) {
            xp[i] += step * dir[i];
            xm[i] -= step * dir[i];
        }
        CVec fp = f(xp), fm = f(xm);
        CVec d(fp.size());
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = (fp[k] - fm[k]) / (2.0 * step);
        return d;
    };
    CVec d1 = central(h);
    if (!richardson) return d1;
    CVec d2 = central(0.5 * h);
    for (std::size_t k = 0; k < d1.size(); ++k) d1[k] = (4.0 * d2[k] - d1[k]) / 3.0;
    return d1;
}

}  // namespace leglift
