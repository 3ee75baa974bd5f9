#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>

#include "lifting.hpp"

namespace leglift {

// ---------------------------------------------------------------------------
// Double points of a parametric immersion. The search samples a parameter
// grid, pairs up samples whose projective images nearly coincide, refines
// each candidate pair by damped Gauss-Newton on
//     residual(p, q, phi) = h(p) - e^{i phi} h(q),
// and classifies the refined solution set: isolated points, S^1 families
// (connected chains of solutions), or a covering identification (solutions at
// a positive fraction of all samples, e.g. the antipodal map).

struct DoublePointRecord {
    enum class Kind { Isolated, CircleFamily, Covering };
    Kind kind = Kind::Isolated;
    Param p, q;            // representative refined pair
    double image_distance = 0.0;
    double phase = 0.0;    // h(p) = e^{i phase} h(q) at the refined pair
    bool transverse = false;
    int multiplicity = 2;  // preimages over the shared image point
    std::vector<std::pair<Param, Param>> family;  // samples along a family
};

struct DoublePointSearch {
    std::vector<DoublePointRecord> records;
    int candidates = 0;
    int newton_failures = 0;
    bool covering = false;
};

namespace detail {

struct RefineResult {
    bool ok = false;
    Param p, q;
    double phase = 0.0;
    double residual = 0.0;
};

inline Eigen::VectorXd pair_residual(const ParametricImmersion& f, const Param& p,
                                     const Param& q, double phi) {
    CVec hp = f.representative(p), hq = f.representative(q);
    Complex e = std::polar(1.0, phi);
    Eigen::VectorXd r(2 * hp.size());
    for (std::size_t k = 0; k < hp.size(); ++k) {
        Complex d = hp[k] - e * hq[k];
        r[2 * k] = d.real();
        r[2 * k + 1] = d.imag();
    }
    return r;
}

// damped Gauss-Newton over (p, q, phi); a rank-revealing least-squares step
// keeps the iteration stable along one-parameter solution families
inline RefineResult refine_pair(const ParametricImmersion& f, Param p, Param q,
                                const Tolerances& tol, bool fix_q = false) {
    const int d = f.domain.dim;
    const int n = f.ambient_n;
    const double h = 1e-6;
    double phi = 0.0;
    {
        Complex ov = herm(f.representative(q), f.representative(p));
        if (std::abs(ov) > 0) phi = std::arg(ov);
    }
    Eigen::VectorXd r = pair_residual(f, p, q, phi);
    double rn = r.norm();
    RefineResult out;
    for (int iter = 0; iter < tol.newton_max_iter; ++iter) {
        if (rn <= tol.dp_tol) {
            out.ok = true;
            break;
        }
        const int nvars = fix_q ? d + 1 : 2 * d + 1;
        Eigen::MatrixXd J(2 * n, nvars);
        int col = 0;
        for (int i = 0; i < d; ++i, ++col) {
            Param pp = p, pm = p;
            pp[i] += h;
            pm[i] -= h;
            Eigen::VectorXd rp = pair_residual(f, pp, q, phi);
            Eigen::VectorXd rm = pair_residual(f, pm, q, phi);
            J.col(col) = (rp - rm) / (2 * h);
        }
        if (!fix_q) {
            for (int i = 0; i < d; ++i, ++col) {
                Param qp = q, qm = q;
                qp[i] += h;
                qm[i] -= h;
                Eigen::VectorXd rp = pair_residual(f, p, qp, phi);
                Eigen::VectorXd rm = pair_residual(f, p, qm, phi);
                J.col(col) = (rp - rm) / (2 * h);
            }
        }
        {  // d/dphi of -e^{i phi} h(q) is -i e^{i phi} h(q), analytic
            CVec hq = f.representative(q);
            Complex e = std::polar(1.0, phi);
            for (int k = 0; k < n; ++k) {
                Complex v = Complex(0, -1) * e * hq[k];
                J(2 * k, col) = v.real();
                J(2 * k + 1, col) = v.imag();
            }
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-7);
        Eigen::VectorXd step = svd.solve(-r);
        // step halving against overshoot
        double scale = 1.0;
        Param p2, q2;
        double phi2 = phi, rn2 = rn;
        Eigen::VectorXd r2;
        for (int back = 0; back < 12; ++back, scale *= 0.5) {
            p2 = p;
            q2 = q;
            int c = 0;
            for (int i = 0; i < d; ++i, ++c) p2[i] += scale * step[c];
            if (!fix_q)
                for (int i = 0; i < d; ++i, ++c) q2[i] += scale * step[c];
            phi2 = phi + scale * step[c];
            r2 = pair_residual(f, p2, q2, phi2);
            rn2 = r2.norm();
            if (rn2 < rn) break;
        }
        if (rn2 >= rn) break;  // stalled
        p = p2;
        q = q2;
        phi = phi2;
        r = r2;
        rn = rn2;
    }
    out.ok = rn <= tol.dp_tol;
    out.p = std::move(p);
    out.q = std::move(q);
    out.phase = wrap_angle(phi);
    out.residual = rn;
    return out;
}

// tangent images of the two sheets, stacked as real columns in the chart at
// the shared image; transverse when the stack has full rank 2(n-1)
inline bool sheets_transverse(const ParametricImmersion& f, const Param& p, const Param& q,
                              const Tolerances& tol) {
    const int d = f.domain.dim;
    CVec h = f.representative(p);
    int chart = argmax_chart(h);
    auto F = [&](const Param& x) { return chart_locate(f.representative(x), chart, tol).z; };
    Eigen::MatrixXd M(2 * (f.ambient_n - 1), 2 * d);
    for (int side = 0; side < 2; ++side) {
        const Param& x = side == 0 ? p : q;
        for (int i = 0; i < d; ++i) {
            Param dir(d, 0.0);
            dir[i] = 1.0;
            CVec dv = directional_derivative(F, x, dir, 1e-6);
            for (int k = 0; k < f.ambient_n - 1; ++k) {
                M(2 * k, side * d + i) = dv[k].real();
                M(2 * k + 1, side * d + i) = dv[k].imag();
            }
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues().minCoeff() > tol.rank_tol;
}

struct PairKey {
    Param p, q;
};

}  // namespace detail

// preimages of the image point f(x0): refined grid candidates, clustered by
// domain distance
inline std::vector<Param> count_preimages(const ParametricImmersion& f, const Param& x0,
                                          int grid_density, const Tolerances& tol = {}) {
    CVec h0 = f.representative(x0);
    auto grid = f.domain.grid(grid_density);
    double spacing = f.domain.grid_spacing(grid_density);
    // coarse threshold from the largest image step between neighbouring samples
    double max_step = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (f.domain.distance(grid[i - 1], grid[i]) < 1.5 * spacing)
            max_step = std::max(max_step,
                                projective_dist(f.representative(grid[i - 1]),
                                                f.representative(grid[i])));
    double coarse = 3.0 * max_step;
    std::vector<Param> found;
    auto known = [&](const Param& x) {
        for (const auto& y : found)
            if (f.domain.distance(x, y) < 0.5 * spacing) return true;
        return false;
    };
    for (const auto& g : grid) {
        if (projective_dist(f.representative(g), h0) > coarse) continue;
        // Gauss-Newton on the candidate alone, with the image point frozen
        detail::RefineResult rr = detail::refine_pair(f, g, x0, tol, /*fix_q=*/true);
        if (!rr.ok) continue;
        Param cp = f.domain.canonical(rr.p);
        if (!known(cp)) found.push_back(cp);
    }
    std::sort(found.begin(), found.end());
    return found;
}

inline DoublePointSearch find_double_points(const ParametricImmersion& f, int grid_density,
                                            const Tolerances& tol = {}) {
    if (grid_density < 8) throw domain_error("grid density must be at least 8 per axis");
    DoublePointSearch out;
    auto grid = f.domain.grid(grid_density);
    const std::size_t N = grid.size();
    const double spacing = f.domain.grid_spacing(grid_density);
    const double min_sep = std::max(3.0 * spacing, 0.5);

    std::vector<CVec> reps(N);
    for (std::size_t i = 0; i < N; ++i) reps[i] = f.representative(grid[i]);

    double max_step = 0.0;
    for (std::size_t i = 1; i < N; ++i)
        if (f.domain.distance(grid[i - 1], grid[i]) < 1.5 * spacing)
            max_step = std::max(max_step, projective_dist(reps[i - 1], reps[i]));
    // a true pair always has a grid pair within ~max_step of image
    // coincidence; cap the threshold so coarse grids do not saturate it
    const double coarse = std::min(1.5 * max_step, 1.0);

    struct Cand {
        std::size_t i, j;
        double dist;
    };
    std::vector<Cand> cand;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) {
            if (f.domain.distance(grid[i], grid[j]) < min_sep) continue;
            double dd = projective_dist(reps[i], reps[j]);
            if (dd < coarse) cand.push_back({i, j, dd});
        }
    out.candidates = int(cand.size());
    std::stable_sort(cand.begin(), cand.end(),
                     [](const Cand& a, const Cand& b) { return a.dist < b.dist; });

    // refine, thinning seeds that sit next to an already-refined solution
    struct Sol {
        Param p, q;
        double residual, phase;
    };
    std::vector<Sol> sols;
    auto near_solution = [&](const Param& a, const Param& b) {
        for (const auto& s : sols) {
            bool direct = f.domain.distance(a, s.p) < spacing &&
                          f.domain.distance(b, s.q) < spacing;
            bool swapped = f.domain.distance(a, s.q) < spacing &&
                           f.domain.distance(b, s.p) < spacing;
            if (direct || swapped) return true;
        }
        return false;
    };
    auto duplicate_solution = [&](const Param& a, const Param& b) {
        const double r = 0.35 * spacing;
        for (const auto& s : sols) {
            bool direct = f.domain.distance(a, s.p) < r && f.domain.distance(b, s.q) < r;
            bool swapped = f.domain.distance(a, s.q) < r && f.domain.distance(b, s.p) < r;
            if (direct || swapped) return true;
        }
        return false;
    };
    for (const auto& c : cand) {
        if (near_solution(grid[c.i], grid[c.j])) continue;
        detail::RefineResult rr = detail::refine_pair(f, grid[c.i], grid[c.j], tol);
        if (!rr.ok) {
            ++out.newton_failures;
            continue;
        }
        if (f.domain.distance(rr.p, rr.q) < 0.5 * min_sep) continue;
        Param p = f.domain.canonical(rr.p), q = f.domain.canonical(rr.q);
        if (duplicate_solution(p, q)) continue;
        if (q < p) {
            std::swap(p, q);
            rr.phase = wrap_angle(-rr.phase);
        }
        sols.push_back({std::move(p), std::move(q), rr.residual, rr.phase});
    }

    // positive-dimensional identification: solutions at (essentially) every
    // sample means the image is multiply covered, not crossed along circles
    std::size_t covered = 0;
    for (std::size_t i = 0; i < N; ++i) {
        bool hit = false;
        for (const auto& s : sols) {
            if (f.domain.distance(grid[i], s.p) < 1.2 * spacing ||
                f.domain.distance(grid[i], s.q) < 1.2 * spacing) {
                hit = true;
                break;
            }
        }
        covered += hit;
    }
    if (sols.size() > N / 8 && covered >= (95 * N) / 100) {
        out.covering = true;
        std::sort(sols.begin(), sols.end(),
                  [](const Sol& a, const Sol& b) { return a.p < b.p; });
        DoublePointRecord rec;
        rec.kind = DoublePointRecord::Kind::Covering;
        rec.p = sols.front().p;
        rec.q = sols.front().q;
        rec.image_distance = sols.front().residual;
        rec.phase = sols.front().phase;
        std::size_t stride = std::max<std::size_t>(1, sols.size() / 16);
        for (std::size_t i = 0; i < sols.size() && rec.family.size() < 16; i += stride)
            rec.family.emplace_back(sols[i].p, sols[i].q);
        rec.multiplicity = int(count_preimages(f, rec.p, grid_density, tol).size());
        out.records.push_back(std::move(rec));
        return out;
    }

    // single-linkage clustering in pair space
    const double ctol = 1.5 * spacing;
    std::vector<int> comp(sols.size(), -1);
    auto pair_close = [&](const Sol& a, const Sol& b) {
        bool direct = f.domain.distance(a.p, b.p) < ctol && f.domain.distance(a.q, b.q) < ctol;
        bool swapped = f.domain.distance(a.p, b.q) < ctol && f.domain.distance(a.q, b.p) < ctol;
        return direct || swapped;
    };
    int ncomp = 0;
    for (std::size_t i = 0; i < sols.size(); ++i) {
        if (comp[i] >= 0) continue;
        comp[i] = ncomp;
        std::vector<std::size_t> stack{i};
        while (!stack.empty()) {
            std::size_t a = stack.back();
            stack.pop_back();
            for (std::size_t b = 0; b < sols.size(); ++b)
                if (comp[b] < 0 && pair_close(sols[a], sols[b])) {
                    comp[b] = ncomp;
                    stack.push_back(b);
                }
        }
        ++ncomp;
    }

    for (int c = 0; c < ncomp; ++c) {
        std::vector<const Sol*> members;
        for (std::size_t i = 0; i < sols.size(); ++i)
            if (comp[i] == c) members.push_back(&sols[i]);
        if (members.empty()) continue;
        std::sort(members.begin(), members.end(),
                  [](const Sol* a, const Sol* b) { return a->p < b->p; });
        double diameter = 0.0;
        for (const auto* m : members)
            diameter = std::max(diameter, std::max(f.domain.distance(members[0]->p, m->p),
                                                   f.domain.distance(members[0]->q, m->q)));
        DoublePointRecord rec;
        rec.p = members[0]->p;
        rec.q = members[0]->q;
        rec.image_distance = members[0]->residual;
        rec.phase = members[0]->phase;
        if (diameter < 0.75 * spacing) {
            rec.kind = DoublePointRecord::Kind::Isolated;
            rec.transverse = detail::sheets_transverse(f, rec.p, rec.q, tol);
        } else {
            rec.kind = DoublePointRecord::Kind::CircleFamily;
            for (const auto* m : members) rec.family.emplace_back(m->p, m->q);
        }
        out.records.push_back(std::move(rec));
    }
    std::sort(out.records.begin(), out.records.end(),
              [](const DoublePointRecord& a, const DoublePointRecord& b) { return a.p < b.p; });
    return out;
}

// ---------------------------------------------------------------------------
// Condition (2): the lifting integral along a path between the preimages must
// be nonzero mod 2pi and, when several points share one image, pairwise
// distinct.

inline double separation_between(const ParametricImmersion& f, const Param& p,
                                 const Param& q, const Tolerances& tol = {},
                                 int samples = 96) {
    LiftIntegral li = lifting_integral(f, PathSpec::line(p, q, samples), 0.0, tol);
    return li.angle;  // mod 2pi
}

inline std::vector<SeparationEntry> check_condition2(
    const ParametricImmersion& f, const std::vector<DoublePointRecord>& records,
    const Tolerances& tol = {}) {
    std::vector<SeparationEntry> out;
    std::vector<CVec> images;
    for (const auto& rec : records) {
        SeparationEntry e;
        e.p = rec.p;
        e.q = rec.q;
        e.separation = separation_between(f, rec.p, rec.q, tol);
        e.nonzero = circ_dist(e.separation, 0.0) > tol.sep_margin;
        images.push_back(f.representative(rec.p));
        out.push_back(std::move(e));
    }
    // pairwise-distinct among records sharing an image point
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j) {
            if (projective_dist(images[i], images[j]) > 1e-6) continue;
            if (circ_dist(out[i].separation, out[j].separation) <= tol.sep_margin) {
                out[i].distinct = false;
                out[j].distinct = false;
            }
        }
    for (auto& e : out) e.pass = e.nonzero && e.distinct;
    return out;
}

}  // namespace leglift
