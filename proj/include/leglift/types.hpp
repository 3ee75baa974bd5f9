#pragma once

#include <complex>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace leglift {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;    // complex coordinate vector
using Param = std::vector<double>;    // point of a parameter domain
using RVec = std::vector<double>;     // real tangent vector, (x1,y1,x2,y2,...) layout

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Errors

struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct chart_miss_error : domain_error {
    using domain_error::domain_error;
};
struct radius_overflow_error : domain_error {
    using domain_error::domain_error;
};
struct quadrature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct condition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct schema_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Tolerances and knobs. Defaults are the library-wide contract; everything is
// overridable from the CLI.

struct Tolerances {
    double locate_tol = 1e-10;     // minimum |h_j| to place a point in chart j
    double norm_tol = 1e-10;       // unit-sphere membership
    double tangency_tol = 1e-8;    // <w,v> bound for sphere-tangent vectors
    double fd_step = 1e-5;         // central-difference step for form pullbacks
    double deriv_step = 1e-4;      // 5-point stencil step for path derivatives
    double quad_tol = 1e-10;       // adaptive Simpson tolerance per segment
    int quad_max_depth = 24;
    double chart_margin = 0.35;    // hysteresis threshold, scaled by ambient n
    double continuity_tol = 0.5;   // max projective step between path samples
    double hol_tol = 1e-7;         // condition (1) pass bound
    double sep_margin = 1e-3;      // condition (2) distance from 0 mod 2pi
    double dp_tol = 1e-10;         // refined double-point residual
    int newton_max_iter = 50;
    double rank_tol = 1e-6;        // smallest singular value for rank/transversality
    double lagr_tol = 1e-6;        // Lagrangian pullback residual
    double smooth_area_tol = 1e-3; // crossing-dt stability under fillet refinement

    // chart switching must stay reachable: max_i |h_i| >= 1/sqrt(n)
    double margin_for(int n) const {
        return std::min(chart_margin, 0.9 / std::sqrt(double(n)));
    }
};

// ---------------------------------------------------------------------------
// Angle helpers. Fiber angles live in [0, 2pi); comparisons use the shortest
// circular distance.

inline double wrap_angle(double t) {
    double r = std::fmod(t, two_pi);
    if (r < 0) r += two_pi;
    if (r == two_pi) r = 0.0;
    return r;
}

inline double circ_dist(double a, double b) {
    double d = std::fabs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, two_pi - d);
}

// ---------------------------------------------------------------------------
// Complex vector helpers

// Hermitian inner product <a,b> = sum conj(a_k) b_k
inline Complex herm(const CVec& a, const CVec& b) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
}

inline double norm2(const CVec& a) { return herm(a, a).real(); }
inline double vnorm(const CVec& a) { return std::sqrt(norm2(a)); }

inline CVec normalized(CVec a) {
    double n = vnorm(a);
    if (n == 0.0) throw domain_error("cannot normalize the zero vector");
    for (auto& z : a) z /= n;
    return a;
}

inline bool all_finite(const CVec& a) {
    for (const auto& z : a)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

// distance between projective points given by unit representatives:
// min over phase of |h1 - e^{i phi} h2| = sqrt(2 - 2|<h1,h2>|)
inline double projective_dist(const CVec& h1, const CVec& h2) {
    double c = std::abs(herm(h1, h2));
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::min(1.0, c)));
}

// view a complex vector as the real vector (x1,y1,x2,y2,...)
inline RVec as_real(const CVec& z) {
    RVec v(2 * z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        v[2 * k] = z[k].real();
        v[2 * k + 1] = z[k].imag();
    }
    return v;
}

inline CVec as_complex(const RVec& v) {
    CVec z(v.size() / 2);
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = Complex(v[2 * k], v[2 * k + 1]);
    return z;
}

}  // namespace leglift
