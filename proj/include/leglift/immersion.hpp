#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "charts.hpp"

namespace leglift {

// ---------------------------------------------------------------------------
// Parameter domains. A torus T^d carries angle coordinates mod 2pi; a sphere
// S^d carries spherical coordinates (phi_1..phi_{d-1} in (0,pi), theta in
// [0,2pi)). Distance is measured in the domain itself, not in coordinates, so
// coordinate singularities of the sphere do not create phantom point pairs.

struct ParameterDomain {
    enum class Kind { Torus, Sphere };
    Kind kind = Kind::Torus;
    int dim = 2;

    static ParameterDomain torus(int d) { return {Kind::Torus, d}; }
    static ParameterDomain sphere(int d) { return {Kind::Sphere, d}; }

    // unit-vector embedding of a sphere point, R^{d+1}
    RVec sphere_embed(const Param& p) const {
        RVec v(dim + 1);
        double s = 1.0;
        for (int i = 0; i < dim - 1; ++i) {
            v[i] = s * std::cos(p[i]);
            s *= std::sin(p[i]);
        }
        v[dim - 1] = s * std::cos(p[dim - 1]);
        v[dim] = s * std::sin(p[dim - 1]);
        return v;
    }

    double distance(const Param& a, const Param& b) const {
        if (kind == Kind::Torus) {
            double d = 0.0;
            for (int i = 0; i < dim; ++i) d = std::max(d, circ_dist(a[i], b[i]));
            return d;
        }
        RVec va = sphere_embed(a), vb = sphere_embed(b);
        double dot = 0.0;
        for (int i = 0; i <= dim; ++i) dot += va[i] * vb[i];
        return std::acos(std::clamp(dot, -1.0, 1.0));
    }

    Param wrap(Param p) const {
        if (kind == Kind::Torus)
            for (auto& x : p) x = wrap_angle(x);
        return p;
    }

    // canonical representative: torus angles in [0,2pi); sphere coordinates
    // recovered from the unit-vector embedding (polar angles in [0,pi])
    Param canonical(const Param& p) const {
        if (kind == Kind::Torus) return wrap(p);
        RVec v = sphere_embed(p);
        Param out(dim);
        double tail = 1.0;
        for (int i = 0; i < dim - 1; ++i) {
            double c = std::clamp(v[i] / (tail > 1e-300 ? tail : 1.0), -1.0, 1.0);
            out[i] = std::acos(c);
            tail *= std::sin(out[i]);
        }
        out[dim - 1] = wrap_angle(std::atan2(v[dim], v[dim - 1]));
        return out;
    }

    // uniform sample grid, g points per axis; sphere polar angles are offset
    // by half a step so samples avoid the coordinate poles
    std::vector<Param> grid(int g) const {
        std::vector<Param> out;
        std::vector<int> idx(dim, 0);
        out.reserve(std::size_t(std::pow(double(g), dim)));
        for (;;) {
            Param p(dim);
            for (int i = 0; i < dim; ++i) {
                if (kind == Kind::Torus || i == dim - 1)
                    p[i] = two_pi * idx[i] / g;
                else
                    p[i] = std::numbers::pi * (idx[i] + 0.5) / g;
            }
            out.push_back(p);
            int i = dim - 1;
            while (i >= 0 && ++idx[i] == g) idx[i--] = 0;
            if (i < 0) break;
        }
        return out;
    }

    double grid_spacing(int g) const {
        return (kind == Kind::Torus ? two_pi : std::numbers::pi) / g;
    }
};

// ---------------------------------------------------------------------------
// A path in the parameter domain, with the sample count used for chart
// segmentation and continuity checks.

struct PathSpec {
    std::function<Param(double)> curve;  // [0,1] -> domain
    int samples = 64;

    static PathSpec line(Param from, Param to, int samples = 64) {
        return {[from = std::move(from), to = std::move(to)](double s) {
                    Param p(from.size());
                    for (std::size_t i = 0; i < p.size(); ++i)
                        p[i] = from[i] + s * (to[i] - from[i]);
                    return p;
                },
                samples};
    }
};

// ---------------------------------------------------------------------------
// A parametric immersion into CP^{n-1}. `eval` returns a unit-norm
// homogeneous representative, smooth in the parameters. Immersions whose
// image is described inside one hemispherical chart may also provide
// `eval_chart` (chart coordinates, length n-1); the lifting integral then
// works directly in that chart and needs no representative at all, which
// keeps families that wander outside the closed ball integrable.

struct ParametricImmersion {
    std::string name;
    int ambient_n = 3;
    ParameterDomain domain;
    std::function<CVec(const Param&)> eval;
    std::optional<int> single_chart;
    std::function<CVec(const Param&)> eval_chart;
    std::vector<PathSpec> h1_generators;
    std::map<std::string, double> metadata;

    CVec representative(const Param& p) const {
        if (eval) return eval(p);
        // fall back to embedding the chart description
        return chart_embed(ChartPoint{*single_chart, eval_chart(p)});
    }
};

}  // namespace leglift
