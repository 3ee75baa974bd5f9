#pragma once

#include <algorithm>

#include "numerics.hpp"
#include "types.hpp"

namespace leglift {

// ---------------------------------------------------------------------------
// Hemispherical charts of CP^{n-1} and the trivialization of the Hopf bundle
// over them.
//
// Chart j identifies the open unit ball B_j in C^{n-1} (coordinates z with the
// j-th slot omitted) with the projective points whose j-th homogeneous
// coordinate is nonzero, via z -> [z_1 : ... : sqrt(1-|z|^2) : ... : z_n].
// The inserted entry is the nonnegative root throughout; the fiber coordinate
// t multiplies the whole representative by e^{it}.

struct ChartPoint {
    int chart = 1;  // 1-based chart index in 1..n
    CVec z;         // length n-1, |z|^2 < 1

    int ambient_n() const { return int(z.size()) + 1; }
};

struct FiberedChartPoint {
    ChartPoint base;
    double t = 0.0;  // fiber angle in [0, 2pi)
};

inline void check_chart_index(int j, int n) {
    if (j < 1 || j > n) throw domain_error("chart index out of range");
}

// unit-norm homogeneous representative with real positive j-th slot
inline CVec chart_embed(const ChartPoint& p) {
    if (!all_finite(p.z)) throw domain_error("chart point has non-finite entries");
    int n = p.ambient_n();
    check_chart_index(p.chart, n);
    double r2 = norm2(p.z);
    if (r2 >= 1.0) throw radius_overflow_error("chart point outside the open unit ball");
    CVec h(n);
    for (int i = 0, k = 0; i < n; ++i) {
        if (i + 1 == p.chart)
            h[i] = std::sqrt(1.0 - r2);
        else
            h[i] = p.z[k++];
    }
    return h;
}

// point of S^{2n-1}: e^{it} times the chart representative
inline CVec bundle_embed(const FiberedChartPoint& p) {
    CVec h = chart_embed(p.base);
    Complex phase = std::polar(1.0, p.t);
    for (auto& w : h) w *= phase;
    return h;
}

// invert chart_embed on the canonical representative of [h]
inline ChartPoint chart_locate(const CVec& h, int j, const Tolerances& tol = {}) {
    int n = int(h.size());
    check_chart_index(j, n);
    double hn = vnorm(h);
    if (hn == 0.0) throw domain_error("zero homogeneous vector");
    double hj = std::abs(h[j - 1]);
    if (hj <= tol.locate_tol * hn)
        throw chart_miss_error("projective point misses chart " + std::to_string(j));
    Complex scale = std::conj(h[j - 1]) / (hj * hn);
    ChartPoint p;
    p.chart = j;
    p.z.reserve(n - 1);
    for (int i = 0; i < n; ++i)
        if (i + 1 != j) p.z.push_back(h[i] * scale);
    return p;
}

// change of trivialization B_j x S^1 -> B_k x S^1 over the chart overlap;
// commutes with bundle_embed and shifts the fiber by arg of the k-th
// coordinate of the chart-j representative
inline FiberedChartPoint transition_point(const FiberedChartPoint& p, int k,
                                          const Tolerances& tol = {}) {
    CVec w = bundle_embed(p);
    int n = int(w.size());
    check_chart_index(k, n);
    if (std::abs(w[k - 1]) <= tol.locate_tol)
        throw chart_miss_error("transition target chart " + std::to_string(k) +
                               " misses the point");
    FiberedChartPoint q;
    q.base = chart_locate(w, k, tol);
    q.t = wrap_angle(std::arg(w[k - 1]));
    return q;
}

// ---------------------------------------------------------------------------
// Standard forms. Tangent vectors use the (x1,y1,x2,y2,...) real layout.

// the chart 1-form  -sum_i (x_i dy_i - y_i dx_i)  on B_j (slot j is absent
// from the stored coordinates, so the sum runs over all of them)
inline double chart_connection_form(const ChartPoint& p, const RVec& v) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.z.size(); ++k)
        s += p.z[k].real() * v[2 * k + 1] - p.z[k].imag() * v[2 * k];
    return -s;
}

// the ambient contact form  1/2 sum (x_i dy_i - y_i dx_i)  at w
inline double contact_form(const CVec& w, const RVec& v) {
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
        s += w[k].real() * v[2 * k + 1] - w[k].imag() * v[2 * k];
    return 0.5 * s;
}

// standard symplectic form  sum dx_i ^ dy_i
inline double standard_symplectic(const RVec& v, const RVec& u) {
    if (v.size() != u.size()) throw domain_error("symplectic form: dimension mismatch");
    double s = 0.0;
    for (std::size_t k = 0; 2 * k + 1 < v.size(); ++k)
        s += v[2 * k] * u[2 * k + 1] - v[2 * k + 1] * u[2 * k];
    return s;
}

// Fubini-Study form evaluated at a unit-norm homogeneous representative z on
// ambient tangent vectors u, v:
//   w_FS(u, v) = Im<u,v> + Im(<z,u> conj(<z,v>))
// (degenerate along the fiber and radial directions, as it must be)
inline double fubini_study_form(const CVec& z, const CVec& u, const CVec& v) {
    Complex a = herm(z, u), b = herm(z, v);
    return herm(u, v).imag() + (a * std::conj(b)).imag();
}

// Reeb field R = 2 T_z and the Hopf generator T_z at w
inline RVec hopf_generator(const CVec& w) {
    RVec t(2 * w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        t[2 * k] = -w[k].imag();
        t[2 * k + 1] = w[k].real();
    }
    return t;
}

inline RVec reeb_field(const CVec& w) {
    RVec r = hopf_generator(w);
    for (auto& x : r) x *= 2.0;
    return r;
}

}  // namespace leglift
