#pragma once

#include <optional>

#include "immersion.hpp"
#include "numerics.hpp"

namespace leglift {

// ---------------------------------------------------------------------------
// Chart segmentation of a path. Greedy with hysteresis: keep the current
// chart until its homogeneous coordinate drops below the margin, then switch
// to the coordinate of largest modulus. Every sample of a segment is
// guaranteed to clear the margin in that segment's chart.

struct ChartSegmentation {
    std::vector<double> breakpoints;  // 0 = s_0 < ... < s_m = 1
    std::vector<int> charts;          // chart per segment, size m
};

inline int argmax_chart(const CVec& h) {
    int best = 1;
    for (int j = 2; j <= int(h.size()); ++j)
        if (std::abs(h[j - 1]) > std::abs(h[best - 1])) best = j;
    return best;
}

inline ChartSegmentation segment_path(const ParametricImmersion& f, const PathSpec& path,
                                      const Tolerances& tol = {}) {
    const int N = std::max(2, path.samples);
    const double margin = tol.margin_for(f.ambient_n);
    std::vector<CVec> reps(N + 1);
    std::vector<double> ss(N + 1);
    for (int i = 0; i <= N; ++i) {
        ss[i] = double(i) / N;
        reps[i] = f.representative(path.curve(ss[i]));
    }
    for (int i = 0; i < N; ++i)
        if (projective_dist(reps[i], reps[i + 1]) > tol.continuity_tol)
            throw condition_error("path samples too far apart for segmentation");

    ChartSegmentation seg;
    seg.breakpoints.push_back(0.0);
    int chart = argmax_chart(reps[0]);
    int i = 1;
    while (i <= N) {
        if (std::abs(reps[i][chart - 1]) < margin) {
            int next = argmax_chart(reps[i - 1]);
            if (std::abs(reps[i][next - 1]) < margin)
                throw condition_error("path undersampled: no chart holds between samples");
            if (ss[i - 1] > seg.breakpoints.back()) {
                seg.breakpoints.push_back(ss[i - 1]);
                seg.charts.push_back(chart);
            }
            chart = next;
        } else {
            ++i;
        }
    }
    seg.breakpoints.push_back(1.0);
    seg.charts.push_back(chart);
    return seg;
}

// ---------------------------------------------------------------------------
// The lifting integral. Within a segment in chart j the fiber angle changes
// by the integral of the chart connection form along the projected path; at a
// chart switch it jumps by the argument of the incoming chart's coordinate of
// the canonical representative.

struct LiftIntegral {
    double raw = 0.0;    // unreduced accumulated change (initial angle excluded)
    double angle = 0.0;  // (a + raw) mod 2pi, in the final chart's trivialization
    int final_chart = 1;
};

// fiber-angle conversion between trivializations at the same projective point
inline double fiber_angle_to_chart(const CVec& h, double t, int from_chart, int to_chart,
                                   const Tolerances& tol = {}) {
    if (from_chart == to_chart) return t;
    CVec w = chart_embed(chart_locate(h, from_chart, tol));
    return t + std::arg(w[to_chart - 1]);
}

namespace detail {

// integral of  -Im<q, q'>  over [lo, hi] for a chart-coordinate path q
inline double integrate_connection(const std::function<CVec(double)>& q, double lo,
                                   double hi, const Tolerances& tol) {
    if (hi <= lo) return 0.0;
    double h = std::min(tol.deriv_step, (hi - lo) / 8.0);
    auto integrand = [&](double u) {
        CVec p = q(u);
        CVec dp = path_derivative(q, u, h, lo, hi);
        return -herm(p, dp).imag();
    };
    return adaptive_simpson(integrand, lo, hi, tol.quad_tol, tol.quad_max_depth);
}

}  // namespace detail

inline LiftIntegral lifting_integral_segmented(const ParametricImmersion& f,
                                               const PathSpec& path,
                                               const ChartSegmentation& seg, double a,
                                               const Tolerances& tol = {}) {
    double raw = 0.0;
    for (std::size_t k = 0; k < seg.charts.size(); ++k) {
        int j = seg.charts[k];
        double lo = seg.breakpoints[k], hi = seg.breakpoints[k + 1];
        if (k > 0)
            raw += fiber_angle_to_chart(f.representative(path.curve(lo)), 0.0,
                                        seg.charts[k - 1], j, tol);
        auto q = [&f, &path, j, &tol](double u) {
            return chart_locate(f.representative(path.curve(u)), j, tol).z;
        };
        raw += detail::integrate_connection(q, lo, hi, tol);
    }
    LiftIntegral out;
    out.raw = raw;
    out.angle = wrap_angle(a + raw);
    out.final_chart = seg.charts.back();
    return out;
}

inline LiftIntegral lifting_integral(const ParametricImmersion& f, const PathSpec& path,
                                     double a, const Tolerances& tol = {}) {
    if (f.single_chart) {
        auto q = [&](double u) { return f.eval_chart(path.curve(u)); };
        LiftIntegral out;
        out.raw = detail::integrate_connection(q, 0.0, 1.0, tol);
        out.angle = wrap_angle(a + out.raw);
        out.final_chart = *f.single_chart;
        return out;
    }
    return lifting_integral_segmented(f, path, segment_path(f, path, tol), a, tol);
}

// integrate a chain of path legs, carrying the fiber angle through chart
// changes at the junctions; returns the total raw change and the final chart
inline LiftIntegral lifting_integral_chain(const ParametricImmersion& f,
                                           const std::vector<PathSpec>& legs, double a,
                                           const Tolerances& tol = {}) {
    LiftIntegral out;
    bool have_chart = false;
    for (const auto& leg : legs) {
        if (f.single_chart) {
            out.raw += lifting_integral(f, leg, 0.0, tol).raw;
            out.final_chart = *f.single_chart;
            continue;
        }
        ChartSegmentation seg = segment_path(f, leg, tol);
        if (have_chart && seg.charts.front() != out.final_chart)
            out.raw += fiber_angle_to_chart(f.representative(leg.curve(0.0)), 0.0,
                                            out.final_chart, seg.charts.front(), tol);
        LiftIntegral li = lifting_integral_segmented(f, leg, seg, 0.0, tol);
        out.raw += li.raw;
        out.final_chart = li.final_chart;
        have_chart = true;
    }
    out.angle = wrap_angle(a + out.raw);
    return out;
}

// ---------------------------------------------------------------------------
// Condition (1): the lifting integral around every H_1 generator must vanish
// mod 2pi. Sphere domains pass vacuously.

struct GeneratorReport {
    std::size_t index = 0;
    double raw = 0.0;       // unreduced holonomy
    double holonomy = 0.0;  // mod 2pi
    int winding = 0;        // nearest integer of raw / 2pi
    bool pass = false;
};

inline std::vector<GeneratorReport> check_condition1(const ParametricImmersion& f,
                                                     const Tolerances& tol = {}) {
    std::vector<GeneratorReport> out;
    for (std::size_t i = 0; i < f.h1_generators.size(); ++i) {
        LiftIntegral li = lifting_integral(f, f.h1_generators[i], 0.0, tol);
        GeneratorReport r;
        r.index = i;
        r.raw = li.raw;
        r.holonomy = li.angle;
        r.winding = int(std::lround(li.raw / two_pi));
        r.pass = circ_dist(li.angle, 0.0) <= tol.hol_tol;
        out.push_back(r);
    }
    return out;
}

inline bool condition1_passes(const std::vector<GeneratorReport>& rep) {
    for (const auto& r : rep)
        if (!r.pass) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Condition (2) entries are produced by check_condition2 (double_points.hpp)
// and attached to the lift result.

struct SeparationEntry {
    Param p, q;
    double separation = 0.0;  // lifting integral from p to q, mod 2pi
    bool nonzero = false;     // clears sep_margin from 0 mod 2pi
    bool distinct = true;     // pairwise distinct among records sharing an image
    bool pass = false;
};

// ---------------------------------------------------------------------------
// The lift. t is the lifting integral along the canonical axis-ordered path
// from the basepoint (first coordinate first, per leg); the lifted point
// multiplies the canonical chart representative by e^{it} in the final
// chart's trivialization.

struct CanonicalLift {
    double t = 0.0;  // unreduced, initial angle included
    int chart = 1;
};

inline std::vector<PathSpec> canonical_tree_legs(const Param& from, const Param& to,
                                                 int samples, bool reversed = false) {
    std::vector<PathSpec> legs;
    Param cur = from;
    const int d = int(from.size());
    for (int k = 0; k < d; ++k) {
        int axis = reversed ? d - 1 - k : k;
        if (to[axis] != cur[axis]) {
            Param target = cur;
            target[axis] = to[axis];
            legs.push_back(PathSpec::line(cur, target, samples));
            cur = target;
        }
    }
    return legs;
}

inline CanonicalLift canonical_lift(const ParametricImmersion& f, const Param& basepoint,
                                    double a, const Param& p, const Tolerances& tol = {},
                                    int leg_samples = 48, bool reversed = false) {
    auto legs = canonical_tree_legs(basepoint, p, leg_samples, reversed);
    if (legs.empty()) {
        int chart = f.single_chart ? *f.single_chart : argmax_chart(f.representative(p));
        return {a, chart};
    }
    LiftIntegral li = lifting_integral_chain(f, legs, a, tol);
    return {a + li.raw, li.final_chart};
}

struct LiftResult {
    double t0 = 0.0;
    int grid_density = 0;
    std::vector<Param> grid;
    std::vector<double> t_of;      // unreduced t per grid sample
    std::vector<int> chart_of;     // trivialization chart per grid sample
    std::vector<GeneratorReport> condition1;
    std::vector<SeparationEntry> condition2;
    bool certified = false;
    std::function<double(const Param&)> t_at;  // unreduced
    std::function<CVec(const Param&)> map;     // into S^{2n-1}
};

inline LiftResult build_lift(const ParametricImmersion& f, Param basepoint, double a,
                             int grid_density, const Tolerances& tol = {},
                             std::vector<SeparationEntry> condition2 = {}) {
    LiftResult out;
    out.condition1 = check_condition1(f, tol);
    if (!condition1_passes(out.condition1))
        throw condition_error("lift does not exist: condition (1) fails on a generator");

    const int d = f.domain.dim;
    const int leg_samples = 48;
    if (int(basepoint.size()) != d) throw domain_error("basepoint dimension mismatch");

    out.t0 = a;
    out.grid_density = grid_density;

    Tolerances ltol = tol;
    out.t_at = [&f, basepoint, a, ltol, leg_samples](const Param& p) {
        return canonical_lift(f, basepoint, a, p, ltol, leg_samples).t;
    };
    out.map = [&f, basepoint, a, ltol, leg_samples](const Param& p) {
        CanonicalLift cl = canonical_lift(f, basepoint, a, p, ltol, leg_samples);
        FiberedChartPoint fp{chart_locate(f.representative(p), cl.chart, ltol),
                             wrap_angle(cl.t)};
        return bundle_embed(fp);
    };

    if (grid_density > 0) {
        out.grid = f.domain.grid(grid_density);
        out.t_of.assign(out.grid.size(), 0.0);
        out.chart_of.assign(out.grid.size(), f.single_chart ? *f.single_chart : 1);
        if (f.single_chart) {
            // incremental sweep: neighbours along an axis share their prefix
            const int g = grid_density;
            std::vector<std::size_t> stride(d, 1);
            for (int axis = d - 2; axis >= 0; --axis)
                stride[axis] = stride[axis + 1] * std::size_t(g);

            std::function<void(int, std::size_t, Param, double)> sweep =
                [&](int axis, std::size_t base, Param prefix, double t_prefix) {
                    for (int i = 0; i < g; ++i) {
                        std::size_t idx = base + std::size_t(i) * stride[axis];
                        double target = out.grid[idx][axis];
                        double t_here = t_prefix;
                        if (target != prefix[axis]) {
                            Param to = prefix;
                            to[axis] = target;
                            t_here += lifting_integral(
                                          f, PathSpec::line(prefix, to, leg_samples), 0.0, tol)
                                          .raw;
                            prefix[axis] = target;
                        }
                        if (axis == d - 1)
                            out.t_of[idx] = t_here;
                        else
                            sweep(axis + 1, idx, prefix, t_here);
                        t_prefix = t_here;
                    }
                };
            // anchor the first grid point through the basepoint once
            double t_first = out.t_at(out.grid.front());
            Param first = out.grid.front();
            sweep(0, 0, first, t_first);
        } else {
            for (std::size_t i = 0; i < out.grid.size(); ++i) {
                CanonicalLift cl =
                    canonical_lift(f, basepoint, a, out.grid[i], tol, leg_samples);
                out.t_of[i] = cl.t;
                out.chart_of[i] = cl.chart;
            }
        }
    }

    // path-tree consistency: reversed axis order must agree mod 2pi
    if (d >= 2) {
        Param probe = basepoint;
        for (int axis = 0; axis < d; ++axis)
            probe[axis] += (f.domain.kind == ParameterDomain::Kind::Sphere ? 0.3 : 1.0) +
                           0.37 * axis;
        CanonicalLift fwd = canonical_lift(f, basepoint, a, probe, tol, leg_samples);
        CanonicalLift rev =
            canonical_lift(f, basepoint, a, probe, tol, leg_samples, /*reversed=*/true);
        double t_rev = fiber_angle_to_chart(f.representative(probe), rev.t, rev.chart,
                                            fwd.chart, tol);
        if (circ_dist(wrap_angle(fwd.t), wrap_angle(t_rev)) > tol.hol_tol)
            throw condition_error("path-tree discontinuity: alternative trees disagree");
    }

    out.condition2 = std::move(condition2);
    bool c2 = true;
    for (const auto& e : out.condition2) c2 = c2 && e.pass;
    out.certified = condition1_passes(out.condition1) && c2;
    return out;
}

}  // namespace leglift
