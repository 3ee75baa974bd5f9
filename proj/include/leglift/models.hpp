#pragma once

#include <array>

#include "immersion.hpp"

namespace leglift {

// ---------------------------------------------------------------------------
// Harvey-Lawson family. The torus T^{n-1} maps into chart n of CP^{n-1} by
//   z_i = r(theta) e^{i(theta_i + S)},  S = theta_1 + ... + theta_{n-1},
//   r(theta) = delta + eps sin S,       delta = sqrt(1/n - eps^2/2).
// delta is pinned so every coordinate loop has holonomy exactly -2pi. The
// image stays inside the closed unit ball only while
// (n-1)(delta+eps)^2 <= 1; beyond that the chart description remains
// integrable but the sphere lift does not exist (embedding raises
// radius_overflow_error pointwise).

struct HLParams {
    int n = 3;
    double eps = 0.0;

    double delta() const { return std::sqrt(1.0 / n - eps * eps / 2.0); }

    void validate() const {
        if (n < 3) throw domain_error("HL family needs ambient dimension n >= 3");
        if (eps < 0.0 || eps >= std::sqrt(2.0 / n))
            throw domain_error("HL parameter must satisfy 0 <= eps < sqrt(2/n)");
    }

    // largest eps for which the image stays in the closed unit ball
    double ball_limit() const { return ball_limit_for(n); }
    static double ball_limit_for(int n) {
        // solve (n-1)(delta(e)+e)^2 = 1
        double lo = 0.0, hi = std::sqrt(2.0 / n);
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            double d = std::sqrt(1.0 / n - mid * mid / 2.0);
            ((n - 1) * (d + mid) * (d + mid) <= 1.0 ? lo : hi) = mid;
        }
        return lo;
    }
};

inline double hl_radius(const HLParams& p, double sum) {
    return p.delta() + p.eps * std::sin(sum);
}

inline ParametricImmersion hl_immersion(const HLParams& p) {
    p.validate();
    const int n = p.n, d = n - 1;
    ParametricImmersion f;
    f.name = "hl";
    f.ambient_n = n;
    f.domain = ParameterDomain::torus(d);
    f.single_chart = n;
    f.metadata = {{"n", double(n)}, {"eps", p.eps}, {"delta", p.delta()}};
    f.eval_chart = [p, d](const Param& th) {
        double S = 0.0;
        for (int i = 0; i < d; ++i) S += th[i];
        double r = hl_radius(p, S);
        CVec z(d);
        for (int i = 0; i < d; ++i) z[i] = std::polar(r, th[i] + S);
        return z;
    };
    f.eval = [p, d, n, chart = f.eval_chart](const Param& th) {
        CVec z = chart(th);
        double r2 = norm2(z);
        if (r2 >= 1.0)
            throw radius_overflow_error("HL image leaves the unit ball at this point");
        CVec h(n);
        for (int i = 0; i < d; ++i) h[i] = z[i];
        h[n - 1] = std::sqrt(1.0 - r2);
        return h;
    };
    for (int i = 0; i < d; ++i) {
        Param from(d, 0.0), to(d, 0.0);
        to[i] = two_pi;
        f.h1_generators.push_back(PathSpec::line(from, to, 64));
    }
    return f;
}

// Closed form of the lift parameter, normalized t(0) = 0:
//   t(theta) = -S + 2 n delta eps (cos S - 1) + (n/4) eps^2 sin(2S).
// This is what the axis-path integral of the connection form evaluates to
// (the coordinate-loop telescoping gives the factor n on the trig terms).
inline double hl_t_closed_form(const HLParams& p, const Param& th) {
    p.validate();
    double S = 0.0;
    for (double x : th) S += x;
    return -S + 2.0 * p.n * p.delta() * p.eps * (std::cos(S) - 1.0) +
           0.25 * p.n * p.eps * p.eps * std::sin(2.0 * S);
}

// Exact circle-family separation for n = 3: the lifting integral from a
// double point with parameter sum S to its partner at sum S + 4pi/3 is
//   -8pi/6 + 2 n delta eps (cos(S+4pi/3) - cos S) + (n/4) eps^2 (sin(2S+8pi/3) - sin 2S).
inline double hl_separation_closed_form(const HLParams& p, double sum_from) {
    double S0 = sum_from, S1 = sum_from + 2.0 * two_pi / 3.0;
    return -(S1 - S0) + 2.0 * p.n * p.delta() * p.eps * (std::cos(S1) - std::cos(S0)) +
           0.25 * p.n * p.eps * p.eps * (std::sin(2 * S1) - std::sin(2 * S0));
}

// ---------------------------------------------------------------------------
// Chord-generic perturbation of the HL torus (n = 3 only):
//   g(theta) = (r1 e^{i(2theta1+theta2)}, r2 e^{i(theta1+2theta2)}),
//   r1 = sqrt(r^2 - (2/3) eps cos theta1),  r2 = sqrt(r^2 + (1/3) eps cos theta1),
// with the fiber correction s = eps sin theta1 making the lift Legendrian.

struct HLPerturbed {
    ParametricImmersion immersion;
    std::function<double(const Param&)> t_closed_form;  // t_eps + eps sin(theta1)
};

inline HLPerturbed hl_perturbed(const HLParams& p) {
    p.validate();
    if (p.n != 3) throw domain_error("the perturbed family is defined for n = 3");
    if (p.eps > 0.25)
        throw domain_error("perturbed family needs eps <= 0.25 to keep radicands positive");

    auto radii = [p](const Param& th) -> std::array<double, 2> {
        double r2 = hl_radius(p, th[0] + th[1]);
        r2 *= r2;
        double a = r2 - (2.0 / 3.0) * p.eps * std::cos(th[0]);
        double b = r2 + (1.0 / 3.0) * p.eps * std::cos(th[0]);
        if (a <= 0.0 || b <= 0.0)
            throw radius_overflow_error("perturbed radicand vanishes at theta1 = " +
                                        std::to_string(th[0]));
        return {std::sqrt(a), std::sqrt(b)};
    };

    HLPerturbed out;
    ParametricImmersion& f = out.immersion;
    f.name = "hl-perturbed";
    f.ambient_n = 3;
    f.domain = ParameterDomain::torus(2);
    f.single_chart = 3;
    f.metadata = {{"n", 3.0}, {"eps", p.eps}, {"delta", p.delta()}};
    f.eval_chart = [radii](const Param& th) {
        auto r = radii(th);
        return CVec{std::polar(r[0], 2 * th[0] + th[1]), std::polar(r[1], th[0] + 2 * th[1])};
    };
    f.eval = [chart = f.eval_chart](const Param& th) {
        CVec z = chart(th);
        double r2 = norm2(z);
        if (r2 >= 1.0)
            throw radius_overflow_error("perturbed HL image leaves the unit ball");
        return CVec{z[0], z[1], Complex(std::sqrt(1.0 - r2), 0.0)};
    };
    for (int i = 0; i < 2; ++i) {
        Param from(2, 0.0), to(2, 0.0);
        to[i] = two_pi;
        f.h1_generators.push_back(PathSpec::line(from, to, 64));
    }
    out.t_closed_form = [p](const Param& th) {
        return hl_t_closed_form(p, th) + p.eps * std::sin(th[0]);
    };
    return out;
}

// the four transverse double points of the perturbed family (unordered pairs)
inline std::vector<std::pair<Param, Param>> hl_perturbed_double_points() {
    const double pi = std::numbers::pi;
    return {
        {{2 * pi / 3, pi / 6}, {4 * pi / 3, 5 * pi / 6}},
        {{5 * pi / 3, 7 * pi / 6}, {pi / 3, 11 * pi / 6}},
        {{2 * pi / 3, 7 * pi / 6}, {4 * pi / 3, 11 * pi / 6}},
        {{5 * pi / 3, pi / 6}, {pi / 3, 5 * pi / 6}},
    };
}

// ---------------------------------------------------------------------------
// Trivial cone. The sphere S^{n-1} maps to [x_1 eta_1 : ... : x_n eta_n]; for
// perturb > 0 (n = 3, eta = (1,1,1)) each coordinate picks up the phase
// e^{i perturb x_k}. The lift of the unperturbed map is the normalized linear
// map, whose cone is the Lagrangian plane spanned by the eta-axes.
//
// The sphere is parametrized through a fixed generic rotation so that the
// distinguished points of the perturbed family (coordinate axes, diagonals)
// sit away from the spherical-coordinate poles.

struct TrivialConeParams {
    CVec eta = {Complex(1, 0), Complex(1, 0), Complex(1, 0)};
    double perturb = 0.0;

    int n() const { return int(eta.size()); }

    void validate() const {
        if (n() < 2) throw domain_error("trivial cone needs at least two coordinates");
        for (const auto& e : eta)
            if (std::abs(e) == 0.0) throw domain_error("trivial cone needs eta_j != 0");
        if (perturb < 0.0) throw domain_error("perturbation must be nonnegative");
        if (perturb > 0.0) {
            if (n() != 3) throw domain_error("perturbed trivial cone is defined for n = 3");
            for (const auto& e : eta)
                if (std::abs(e - Complex(1, 0)) > 1e-14)
                    throw domain_error("perturbed trivial cone is defined for eta = (1,1,1)");
        }
    }
};

namespace detail {

// fixed generic rotation of R^3 (product of coordinate rotations)
inline RVec rotate3(const RVec& v) {
    static const double a = 0.73, b = 0.41, c = 0.19;
    double x = v[0], y = v[1], z = v[2];
    double x1 = x, y1 = y * std::cos(a) - z * std::sin(a), z1 = y * std::sin(a) + z * std::cos(a);
    double x2 = x1 * std::cos(b) + z1 * std::sin(b), y2 = y1, z2 = -x1 * std::sin(b) + z1 * std::cos(b);
    double x3 = x2 * std::cos(c) - y2 * std::sin(c), y3 = x2 * std::sin(c) + y2 * std::cos(c);
    return {x3, y3, z2};
}

}  // namespace detail

inline ParametricImmersion trivial_cone_immersion(const TrivialConeParams& p) {
    p.validate();
    const int n = p.n();
    ParametricImmersion f;
    f.name = "trivial";
    f.ambient_n = n;
    f.domain = ParameterDomain::sphere(n - 1);
    f.metadata = {{"n", double(n)}, {"perturb", p.perturb}};
    f.eval = [p, n, domain = f.domain](const Param& prm) {
        RVec x = domain.sphere_embed(prm);
        if (n == 3) x = detail::rotate3(x);
        CVec h(n);
        for (int k = 0; k < n; ++k) {
            Complex phase =
                p.perturb > 0.0 ? std::polar(1.0, p.perturb * x[k]) : Complex(1.0, 0.0);
            h[k] = x[k] * p.eta[k] * phase;
        }
        return normalized(h);
    };
    // H_1(S^{n-1}) is trivial for n >= 3: no generators to check
    return f;
}

// the normalized linear map whose image is the lift of the unperturbed cone
inline CVec trivial_cone_linear_lift(const TrivialConeParams& p, const Param& prm) {
    ParameterDomain dom = ParameterDomain::sphere(p.n() - 1);
    RVec x = dom.sphere_embed(prm);
    if (p.n() == 3) x = detail::rotate3(x);
    CVec w(p.n());
    for (int k = 0; k < p.n(); ++k) w[k] = x[k] * p.eta[k];
    return normalized(w);
}

// ---------------------------------------------------------------------------
// Product-of-circles torus at fixed radii: Lagrangian, but liftable only when
// every n r_i^2 is an integer. Used as the standard non-liftable example.

inline ParametricImmersion circles_immersion(int n, std::vector<double> radii) {
    if (int(radii.size()) != n - 1) throw domain_error("need n-1 radii");
    double r2 = 0.0;
    for (double r : radii) r2 += r * r;
    if (r2 >= 1.0) throw radius_overflow_error("circle radii leave the unit ball");
    ParametricImmersion f;
    f.name = "circles";
    f.ambient_n = n;
    f.domain = ParameterDomain::torus(n - 1);
    f.single_chart = n;
    f.eval_chart = [radii](const Param& th) {
        CVec z(radii.size());
        for (std::size_t i = 0; i < radii.size(); ++i) z[i] = std::polar(radii[i], th[i]);
        return z;
    };
    f.eval = [n, last = std::sqrt(1.0 - r2), chart = f.eval_chart](const Param& th) {
        CVec z = chart(th);
        z.push_back(Complex(last, 0.0));
        return z;
    };
    for (int i = 0; i < n - 1; ++i) {
        Param from(n - 1, 0.0), to(n - 1, 0.0);
        to[i] = two_pi;
        f.h1_generators.push_back(PathSpec::line(from, to, 64));
    }
    return f;
}

}  // namespace leglift
