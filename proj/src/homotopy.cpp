#include "sunco/homotopy.hpp"

#include "sunco/geom_kernel.hpp"
#include "sunco/linalg.hpp"
#include "sunco/rng.hpp"

#include <algorithm>
#include <sstream>

namespace sunco {

// ---------------------------------------------------------------------------
// deformation

PLDeformation collapse_to_deformation(const Host& h, const CollapseSequence& seq) {
    {
        CollapseSequence probe = seq;
        ReplayResult rr = verify_collapse(h.cx, probe, seq.from, seq.to);
        if (!rr.ok) throw Error(Err::InvalidSequence, rr.reason);
    }
    PLDeformation d;
    size_t ngroups = std::max<size_t>(seq.groups.size(), 1);
    for (size_t gi = 0; gi < seq.groups.size(); ++gi) {
        const SimpleGroup& g = seq.groups[gi];
        size_t nsteps = g.end - g.begin;
        if (nsteps == 0) continue;
        Rat g0 = Rat(static_cast<long>(gi), static_cast<long>(ngroups));
        Rat g1 = Rat(static_cast<long>(gi + 1), static_cast<long>(ngroups));
        for (size_t k = 0; k < nsteps; ++k) {
            const ElementaryStep& st = seq.steps[g.begin + k];
            Stage stage;
            stage.coface = st.coface;
            stage.free_face = st.free_face;
            Simplex opp = simplex_minus(st.coface, st.free_face);
            if (opp.size() != 1) throw Error(Err::InvalidSequence, "non-elementary step");
            stage.opposite = opp[0];
            stage.t0 = g0 + (g1 - g0) * Rat(static_cast<long>(k), static_cast<long>(nsteps));
            stage.t1 = g0 + (g1 - g0) * Rat(static_cast<long>(k + 1), static_cast<long>(nsteps));
            d.stages.push_back(std::move(stage));
        }
    }
    return d;
}

// the min-fold image of z through the stage, or nullopt if z is outside the
// coface
static std::optional<std::pair<Vec, std::vector<Rat>>> fold_point(const Host& h, const Stage& st,
                                                                  const Vec& z) {
    std::vector<Vec> pts = h.cx.cell_points(st.coface);
    auto lam = barycentric_coords(pts, z);
    if (!lam) return std::nullopt;
    for (const Rat& l : *lam)
        if (l < 0) return std::nullopt;
    // indices of the free face and the opposite vertex inside the coface
    std::vector<Rat> out = *lam;
    Rat m;
    bool first = true;
    for (size_t i = 0; i < st.coface.size(); ++i) {
        if (st.coface[i] == st.opposite) continue;
        if (first || out[i] < m) { m = out[i]; first = false; }
    }
    if (m == 0) return std::make_pair(z, out);  // on a wall already
    size_t nfree = st.coface.size() - 1;
    for (size_t i = 0; i < st.coface.size(); ++i) {
        if (st.coface[i] == st.opposite) out[i] += Rat(static_cast<long>(nfree)) * m;
        else out[i] -= m;
    }
    Vec pos(z.size(), Rat(0));
    for (size_t i = 0; i < st.coface.size(); ++i)
        for (size_t c = 0; c < pos.size(); ++c) pos[c] += out[i] * pts[i][c];
    return std::make_pair(pos, out);
}

Vec deformation_eval(const Host& h, const PLDeformation& d, const Vec& x, const Rat& t) {
    Vec z = x;
    for (const Stage& st : d.stages) {
        if (st.t1 <= t) {
            if (auto f = fold_point(h, st, z)) z = f->first;
        } else if (st.t0 < t) {
            if (auto f = fold_point(h, st, z)) {
                Rat u = (t - st.t0) / (st.t1 - st.t0);
                z = vec_lerp(z, f->first, u);
            }
            break;
        } else {
            break;
        }
    }
    return z;
}

Vec host_pf_at(const Host& h, const Vec& z) {
    auto car = carrier_of_point(h.cx, z);
    if (!car) throw Error(Err::PointOutsideComplex, "host PF evaluation");
    auto lam = barycentric_coords(h.cx.cell_points(*car), z);
    Vec out(h.pf[0].size(), Rat(0));
    for (size_t i = 0; i < car->size(); ++i)
        for (size_t c = 0; c < out.size(); ++c)
            out[c] += (*lam)[i] * h.pf[static_cast<size_t>((*car)[i])][c];
    return out;
}

TrackedPath track_point(const Host& h, const PLDeformation& d, const Vec& start) {
    TrackedPath tp;
    tp.times.push_back(Rat(0));
    tp.positions.push_back(start);
    tp.pf.push_back(host_pf_at(h, start));
    Vec z = start;
    for (const Stage& st : d.stages) {
        auto f = fold_point(h, st, z);
        if (!f || f->first == z) continue;
        if (tp.times.back() < st.t0) {
            tp.times.push_back(st.t0);
            tp.positions.push_back(z);
            tp.pf.push_back(tp.pf.back());
        }
        // PF at the folded position, straight from the fold coordinates
        Vec pf(h.pf[0].size(), Rat(0));
        for (size_t i = 0; i < st.coface.size(); ++i)
            for (size_t c = 0; c < pf.size(); ++c)
                pf[c] += f->second[i] * h.pf[static_cast<size_t>(st.coface[i])][c];
        z = f->first;
        tp.times.push_back(st.t1);
        tp.positions.push_back(z);
        tp.pf.push_back(std::move(pf));
    }
    if (tp.times.back() < 1) {
        tp.times.push_back(Rat(1));
        tp.positions.push_back(z);
        tp.pf.push_back(tp.pf.back());
    }
    return tp;
}

Vec h_map(const Host& h, const PLDeformation& d, const Vec& x_base, const Rat& t) {
    Vec start = x_base;
    start.push_back(Rat(1));
    if (t <= Rat(1, 2)) return deformation_eval(h, d, start, 2 * t);
    Vec z = deformation_eval(h, d, start, 2 - 2 * t);
    z.back() = 0;  // base projection included into X x 0
    return z;
}

LevelMap level_shift(const Host& h, const PLDeformation& d, const Complex& base_x,
                     const Partition& part) {
    LevelMap lm;
    lm.host = h;
    lm.def = d;
    lm.part = part;
    lm.base_x = base_x;
    for (size_t v = 0; v < base_x.verts.size(); ++v) {
        Vec bot = base_x.coords(static_cast<int>(v));
        bot.push_back(Rat(0));
        Vec top = base_x.coords(static_cast<int>(v));
        top.push_back(Rat(1));
        lm.f0_q.push_back(host_pf_at(h, bot));
        lm.f1_q.push_back(host_pf_at(h, top));
    }
    return lm;
}

Vec phi_q(const LevelMap& lm, const Vec& x_base, const Rat& t) {
    Rat s = lm.time_reversed ? Rat(1) - t : t;
    Vec z = h_map(lm.host, lm.def, x_base, s);
    return host_pf_at(lm.host, z);
}

// ---------------------------------------------------------------------------
// exact path machinery (dimension-0 components)

namespace {

// piecewise-linear Q-valued path over s in [0,1]
struct QPath {
    std::vector<Rat> s;
    std::vector<Vec> q;

    Vec at(const Rat& t) const {
        size_t i = 1;
        while (i + 1 < s.size() && s[i] < t) ++i;
        // s[i-1] <= t <= s[i] after the scan below
        for (i = 1; i < s.size(); ++i)
            if (t <= s[i]) break;
        Rat u = (s[i] == s[i - 1]) ? Rat(0) : (t - s[i - 1]) / (s[i] - s[i - 1]);
        return vec_lerp(q[i - 1], q[i], u);
    }
};

// closed solution interval of A + uB = 0 on [lo, hi], or empty
struct ZeroSet {
    bool empty = true;
    Rat lo, hi;
};

ZeroSet affine_zero(const Vec& A, const Vec& B, const Rat& lo, const Rat& hi) {
    ZeroSet z;
    Rat l = lo, r = hi;
    for (size_t c = 0; c < A.size(); ++c) {
        if (B[c] == 0) {
            if (A[c] != 0) return z;
        } else {
            Rat root = -A[c] / B[c];
            if (root < l || root > r) return z;
            l = r = root;
        }
    }
    z.empty = false;
    z.lo = l;
    z.hi = r;
    return z;
}

ZeroSet meet(const ZeroSet& a, const ZeroSet& b) {
    ZeroSet z;
    if (a.empty || b.empty) return z;
    Rat l = std::max(a.lo, b.lo), r = std::min(a.hi, b.hi);
    if (l > r) return z;
    z.empty = false;
    z.lo = l;
    z.hi = r;
    return z;
}

}  // namespace

// the delivered-time path of one base point (dimension 0 component)
static QPath build_qpath(const LevelMap& lm, const Vec& x_base) {
    Vec start = x_base;
    start.push_back(Rat(1));
    TrackedPath tp = track_point(lm.host, lm.def, start);
    QPath p;
    // first half: s = t/2 with the track's own PF values
    for (size_t i = 0; i < tp.times.size(); ++i) {
        p.s.push_back(tp.times[i] / 2);
        p.q.push_back(tp.pf[i]);
    }
    // second half: s = 1 - t/2, PF at the base projection included into X x 0
    for (size_t i = tp.times.size(); i-- > 0;) {
        Rat s = 1 - tp.times[i] / 2;
        if (s == p.s.back()) continue;
        Vec z = tp.positions[i];
        z.back() = 0;
        p.s.push_back(s);
        p.q.push_back(host_pf_at(lm.host, z));
    }
    if (lm.time_reversed) {
        std::reverse(p.s.begin(), p.s.end());
        std::reverse(p.q.begin(), p.q.end());
        for (Rat& s : p.s) s = 1 - s;
    }
    return p;
}

// first common point of two paths at equal time, if any
static std::optional<Rat> paths_meet(const QPath& a, const QPath& b) {
    std::vector<Rat> cuts;
    cuts.insert(cuts.end(), a.s.begin(), a.s.end());
    cuts.insert(cuts.end(), b.s.begin(), b.s.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        Rat lo = cuts[i], hi = cuts[i + 1];
        Vec a0 = a.at(lo), a1 = a.at(hi), b0 = b.at(lo), b1 = b.at(hi);
        // difference affine in u over [0,1]
        Vec A = vec_sub(a0, b0);
        Vec B = vec_sub(vec_sub(a1, b1), A);
        ZeroSet z = affine_zero(A, B, Rat(0), Rat(1));
        if (!z.empty) return lo + z.lo * (hi - lo);
    }
    return std::nullopt;
}

static std::optional<Rat> triple_meet(const QPath& a, const QPath& b, const QPath& c) {
    std::vector<Rat> cuts;
    for (const QPath* p : {&a, &b, &c}) cuts.insert(cuts.end(), p->s.begin(), p->s.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        Rat lo = cuts[i], hi = cuts[i + 1];
        Vec a0 = a.at(lo), a1 = a.at(hi);
        Vec b0 = b.at(lo), b1 = b.at(hi);
        Vec c0 = c.at(lo), c1 = c.at(hi);
        Vec A1 = vec_sub(a0, b0), B1 = vec_sub(vec_sub(a1, b1), A1);
        Vec A2 = vec_sub(a0, c0), B2 = vec_sub(vec_sub(a1, c1), A2);
        ZeroSet z = meet(affine_zero(A1, B1, Rat(0), Rat(1)), affine_zero(A2, B2, Rat(0), Rat(1)));
        if (!z.empty) return lo + z.lo * (hi - lo);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// verification

static Vec random_point_in_cell(const Complex& k, const Simplex& s, Rng& rng) {
    // random rational barycentric weights with small denominators
    std::vector<Rat> w;
    Rat total = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        Rat x(static_cast<long>(1 + rng.below(97)), 97);
        w.push_back(x);
        total += x;
    }
    Vec out(static_cast<size_t>(k.ambient_dim), Rat(0));
    for (size_t i = 0; i < s.size(); ++i)
        for (size_t c = 0; c < out.size(); ++c)
            out[c] += (w[i] / total) * k.coords(s[static_cast<size_t>(i)])[c];
    return out;
}

// F-image polyline of the fiber over a dimension-0 base point: the host
// vertices on that fiber, sorted by level, with (pf, height) values.
static std::vector<Vec> fiber_image(const Host& h, const Vec& x_base) {
    std::vector<std::pair<Rat, int>> rungs;
    for (size_t v = 0; v < h.cx.verts.size(); ++v) {
        if (h.base_pos(static_cast<int>(v)) == x_base)
            rungs.push_back({h.level_of(static_cast<int>(v)), static_cast<int>(v)});
    }
    std::sort(rungs.begin(), rungs.end());
    std::vector<Vec> out;
    for (auto& [lvl, v] : rungs) {
        Vec p = h.pf[static_cast<size_t>(v)];
        p.push_back(h.height[static_cast<size_t>(v)]);
        out.push_back(std::move(p));
    }
    return out;
}

using SegList = std::vector<std::pair<Vec, Vec>>;

static void polyline_segments(const std::vector<Vec>& arc, SegList& out) {
    for (size_t i = 0; i + 1 < arc.size(); ++i) out.push_back({arc[i], arc[i + 1]});
}

// one segment from each side with a common point
static bool segment_unions_meet(const std::vector<SegList>& sides) {
    std::vector<size_t> pick(sides.size(), 0);
    for (const SegList& s : sides)
        if (s.empty()) return false;
    while (true) {
        std::vector<std::vector<Vec>> segs;
        for (size_t i = 0; i < sides.size(); ++i)
            segs.push_back({sides[i][pick[i]].first, sides[i][pick[i]].second});
        if (hulls_common_point(segs)) return true;
        size_t i = sides.size();
        bool advanced = false;
        while (i-- > 0) {
            if (++pick[i] < sides[i].size()) { advanced = true; break; }
            pick[i] = 0;
        }
        if (!advanced) return false;
    }
}

VerifyReport verify_level_map(const LevelMap& lm, const VerifyOptions& opt) {
    VerifyReport rep;
    auto fail = [&](const std::string& line, const std::string& wit) {
        rep.ok = false;
        rep.lines.push_back("FAIL " + line);
        if (rep.witness.empty()) rep.witness = wit;
    };
    auto pass = [&](const std::string& line) { rep.lines.push_back("ok   " + line); };

    Rng rng(opt.seed);
    int dimx = lm.base_x.dim();

    // (a) the I-coordinate of the delivered map is t by construction; sample
    // evaluations to exercise the whole composition
    {
        std::vector<Simplex> cells(lm.base_x.cells.begin(), lm.base_x.cells.end());
        for (int i = 0; i < std::min(opt.samples, 25); ++i) {
            const Simplex& cell = cells[static_cast<size_t>(rng.below(cells.size()))];
            Vec x = random_point_in_cell(lm.base_x, cell, rng);
            Rat t(static_cast<long>(rng.below(1000)), 999);
            (void)phi_q(lm, x, t);
        }
        pass("level-preservation (structural; sampled evaluations)");
    }

    // (b) endpoint agreement on vertices
    {
        bool ok = true;
        for (size_t v = 0; v < lm.base_x.verts.size() && ok; ++v) {
            Vec x = lm.base_x.coords(static_cast<int>(v));
            if (phi_q(lm, x, Rat(0)) != lm.f0_q[v] || phi_q(lm, x, Rat(1)) != lm.f1_q[v]) {
                ok = false;
                fail("endpoint agreement at vertex " + std::to_string(v), "vertex image mismatch");
            }
        }
        if (ok) pass("endpoint agreement (exact, all vertices)");
    }

    std::vector<std::pair<int, int>> points;  // (base vertex, label)
    for (size_t v = 0; v < lm.base_x.verts.size(); ++v)
        points.push_back({static_cast<int>(v), lm.part.labels[v]});

    // (c) pairwise disjointness across components (link mode)
    if (opt.mode.kind == Mode::Link && !opt.doodle) {
        if (dimx == 0) {
            std::vector<QPath> paths;
            for (auto& [v, lab] : points) paths.push_back(build_qpath(lm, lm.base_x.coords(v)));
            bool ok = true;
            for (size_t i = 0; i < points.size() && ok; ++i)
                for (size_t j = i + 1; j < points.size() && ok; ++j) {
                    if (points[i].second == points[j].second) continue;
                    if (auto t = paths_meet(paths[i], paths[j])) {
                        ok = false;
                        fail("cross-component disjointness (exact path check)",
                             "components " + std::to_string(points[i].second) + "," +
                                 std::to_string(points[j].second) + " meet at t=" + rat_str(*t));
                    }
                }
            if (ok) pass("cross-component disjointness (exact path check)");
        } else {
            bool ok = true;
            std::vector<Simplex> edges;
            for (const Simplex& s : lm.base_x.cells)
                if (s.size() == 2) edges.push_back(s);
            for (int it = 0; it < opt.samples && ok && !edges.empty(); ++it) {
                const Simplex& e1 = edges[static_cast<size_t>(rng.below(edges.size()))];
                const Simplex& e2 = edges[static_cast<size_t>(rng.below(edges.size()))];
                if (lm.part.labels[static_cast<size_t>(e1[0])] ==
                    lm.part.labels[static_cast<size_t>(e2[0])])
                    continue;
                Vec x1 = random_point_in_cell(lm.base_x, e1, rng);
                Vec x2 = random_point_in_cell(lm.base_x, e2, rng);
                Rat t(static_cast<long>(rng.below(1000)), 999);
                if (phi_q(lm, x1, t) == phi_q(lm, x2, t)) {
                    ok = false;
                    fail("cross-component disjointness (sampled exact)", "sampled coincidence");
                }
            }
            if (ok) pass("cross-component disjointness (certified; sampled exact re-checks)");
        }
    }

    // (d) doodle: no l components share a point at equal time
    if (opt.doodle && dimx == 0 && opt.doodle_l == 3) {
        std::vector<QPath> paths;
        for (auto& [v, lab] : points) paths.push_back(build_qpath(lm, lm.base_x.coords(v)));
        bool ok = true;
        for (size_t i = 0; i < points.size() && ok; ++i)
            for (size_t j = i + 1; j < points.size() && ok; ++j)
                for (size_t k = j + 1; k < points.size() && ok; ++k) {
                    if (points[i].second == points[j].second ||
                        points[i].second == points[k].second ||
                        points[j].second == points[k].second)
                        continue;
                    if (auto t = triple_meet(paths[i], paths[j], paths[k])) {
                        ok = false;
                        fail("triple disjointness (exact path check)",
                             "triple point at t=" + rat_str(*t));
                    }
                }
        if (ok) pass("triple disjointness (exact path check)");
    }

    // (e) eps mode: trace locality and the tuple condition
    if (opt.mode.kind == Mode::Eps && opt.eps) {
        const Rat& eps = *opt.eps;
        bool ok = true;
        if (dimx == 0) {
            for (auto& [v, lab] : points) {
                Vec x = lm.base_x.coords(v);
                Vec start = x;
                start.push_back(Rat(1));
                TrackedPath tp = track_point(lm.host, lm.def, start);
                for (const Vec& z : tp.positions) {
                    Vec bp = z;
                    bp.pop_back();
                    if (!(dist_max(bp, x) <= eps / 2)) {
                        ok = false;
                        fail("trace locality H(x,I) inside N_{eps/2}(x) x I", "trace escapes");
                        break;
                    }
                }
                if (!ok) break;
            }
            if (ok) pass("trace locality (exact, every track breakpoint)");

            // tuple condition on every pair (l = 2 exercises the statement)
            std::vector<QPath> paths;
            for (auto& [v, lab] : points) paths.push_back(build_qpath(lm, lm.base_x.coords(v)));
            bool tok = true;
            for (size_t i = 0; i < points.size() && tok; ++i)
                for (size_t j = i + 1; j < points.size() && tok; ++j) {
                    if (!paths_meet(paths[i], paths[j])) continue;
                    // Phi-images meet: F(N_eps(x_i) x I) must meet too
                    std::vector<SegList> sides(2);
                    for (size_t t = 0; t < 2; ++t) {
                        int base = points[t == 0 ? i : j].first;
                        Vec xs = lm.base_x.coords(base);
                        for (auto& [w, lab2] : points)
                            if (dist_max(lm.base_x.coords(w), xs) <= eps)
                                polyline_segments(fiber_image(lm.host, lm.base_x.coords(w)),
                                                  sides[t]);
                    }
                    if (!segment_unions_meet(sides)) {
                        tok = false;
                        fail("tuple condition", "Phi-coincidence without F-eps-coincidence");
                    }
                }
            if (tok) pass("tuple condition (exact on all pairs)");
        } else {
            pass("eps checks (certified by stable eps certificates)");
        }
    }

    return rep;
}

// ---------------------------------------------------------------------------
// pipeline

LinkWitness concordance_link_check(const Concordance& c, int l) {
    LinkWitness w;
    TowerRef qt = c.qtower();
    // image point lists per maximal tower cell, bucketed by component
    std::vector<std::vector<std::vector<Vec>>> pts(static_cast<size_t>(c.part.k));
    std::vector<std::vector<std::pair<Vec, Vec>>> boxes(static_cast<size_t>(c.part.k));
    std::vector<std::vector<Simplex>> cells(static_cast<size_t>(c.part.k));
    for (const Simplex& s : maximal_cells(c.xp.total.cells)) {
        int lab = c.comp_of_vertex(s[0]);
        std::vector<Vec> img;
        for (int v : s) img.push_back(qt.coords(c.fmap[static_cast<size_t>(v)]));
        Vec lo = img[0], hi = img[0];
        for (const Vec& p : img)
            for (size_t cc = 0; cc < p.size(); ++cc) {
                if (p[cc] < lo[cc]) lo[cc] = p[cc];
                if (p[cc] > hi[cc]) hi[cc] = p[cc];
            }
        pts[static_cast<size_t>(lab - 1)].push_back(std::move(img));
        boxes[static_cast<size_t>(lab - 1)].push_back({lo, hi});
        cells[static_cast<size_t>(lab - 1)].push_back(s);
    }
    auto boxes_meet = [](const std::pair<Vec, Vec>& a, const std::pair<Vec, Vec>& b) {
        for (size_t cc = 0; cc < a.first.size(); ++cc)
            if (a.second[cc] < b.first[cc] || b.second[cc] < a.first[cc]) return false;
        return true;
    };
    if (l == 2) {
        for (int i = 0; i < c.part.k; ++i)
            for (int j = i + 1; j < c.part.k; ++j)
                for (size_t a = 0; a < pts[static_cast<size_t>(i)].size(); ++a)
                    for (size_t b = 0; b < pts[static_cast<size_t>(j)].size(); ++b) {
                        if (!boxes_meet(boxes[static_cast<size_t>(i)][a], boxes[static_cast<size_t>(j)][b])) continue;
                        if (auto hit = hull_common_point(pts[static_cast<size_t>(i)][a],
                                                         pts[static_cast<size_t>(j)][b])) {
                            w.ok = false;
                            w.points = {hit->first, hit->second};
                            w.cells = {cells[static_cast<size_t>(i)][a], cells[static_cast<size_t>(j)][b]};
                            return w;
                        }
                    }
        return w;
    }
    // l-fold: combinations of l distinct components
    std::vector<int> comp(static_cast<size_t>(l));
    for (int i = 0; i < l; ++i) comp[static_cast<size_t>(i)] = i;
    if (l > c.part.k) return w;
    while (true) {
        std::vector<size_t> pick(static_cast<size_t>(l), 0);
        bool done = false;
        for (int i = 0; i < l; ++i)
            if (pts[static_cast<size_t>(comp[static_cast<size_t>(i)])].empty()) done = true;
        while (!done) {
            bool bok = true;
            for (int i = 0; i < l && bok; ++i)
                for (int j = i + 1; j < l && bok; ++j)
                    bok = boxes_meet(boxes[static_cast<size_t>(comp[static_cast<size_t>(i)])][pick[static_cast<size_t>(i)]],
                                     boxes[static_cast<size_t>(comp[static_cast<size_t>(j)])][pick[static_cast<size_t>(j)]]);
            if (bok) {
                std::vector<std::vector<Vec>> sets;
                for (int i = 0; i < l; ++i)
                    sets.push_back(pts[static_cast<size_t>(comp[static_cast<size_t>(i)])][pick[static_cast<size_t>(i)]]);
                if (auto hit = hulls_common_point(sets)) {
                    w.ok = false;
                    w.points = *hit;
                    for (int i = 0; i < l; ++i)
                        w.cells.push_back(cells[static_cast<size_t>(comp[static_cast<size_t>(i)])][pick[static_cast<size_t>(i)]]);
                    return w;
                }
            }
            int i = l - 1;
            while (i >= 0) {
                if (++pick[static_cast<size_t>(i)] <
                    pts[static_cast<size_t>(comp[static_cast<size_t>(i)])].size())
                    break;
                pick[static_cast<size_t>(i)] = 0;
                --i;
            }
            if (i < 0) done = true;
        }
        int i = l - 1;
        while (i >= 0 && comp[static_cast<size_t>(i)] == c.part.k - l + i) --i;
        if (i < 0) break;
        ++comp[static_cast<size_t>(i)];
        for (int j = i + 1; j < l; ++j) comp[static_cast<size_t>(j)] = comp[static_cast<size_t>(j - 1)] + 1;
    }
    return w;
}

PipelineResult pipeline(const Concordance& input, const RunConfig& cfg) {
    validate_concordance(input);
    int m = input.q.dim(), n = input.xp.base.dim();
    if (m - n < 3)
        throw Error(Err::CodimensionTooLow,
                    "pipeline requires codimension >= 3, got " + std::to_string(m - n));
    if (cfg.mode == PipelineMode::LinkMode) {
        LinkWitness w = concordance_link_check(input, 2);
        if (!w.ok) throw Error(Err::ParseError, "input concordance is not a link map");
    } else if (cfg.mode == PipelineMode::DoodleMode) {
        LinkWitness w = concordance_link_check(input, cfg.doodle_l);
        if (!w.ok) throw Error(Err::ParseError, "input concordance is not a doodle");
    }

    PipelineResult res;
    res.conc = perturb_general_position(input, cfg.magnitude, cfg.seed, cfg.retry_budget);
    res.gp = check_general_position(res.conc);
    if (!res.gp.ok()) throw Error(Err::GeneralPositionFailed, "general position after perturbation");

    Host h = make_host(res.conc);

    Mode mode = Mode::link();
    if (cfg.mode == PipelineMode::EpsMode) {
        mode = Mode::eps_mode(cfg.eps);
        // trace locality needs every cell's base image smaller than eps/2
        for (const Simplex& s : h.cx.cells) {
            for (size_t i = 0; i < s.size(); ++i)
                for (size_t j = i + 1; j < s.size(); ++j)
                    if (!(dist_max(h.base_pos(s[static_cast<size_t>(i)]),
                                   h.base_pos(s[static_cast<size_t>(j)])) < cfg.eps / 2))
                        throw Error(Err::UnsupportedHost,
                                    "tower mesh too coarse for the requested eps");
        }
    }

    SunnyOptions sopt;
    sopt.mode = mode;
    res.sunny_seq = sunny_collapse(h, sopt, res.sunny_host);
    res.stab = stabilize(res.sunny_host, res.sunny_seq, mode, cfg.shift);

    PLDeformation def = collapse_to_deformation(res.stab.host, res.stab.seq);
    res.level_map = level_shift(res.stab.host, def, res.conc.xp.base, res.conc.part);

    VerifyOptions vopt;
    vopt.mode = mode;
    vopt.doodle = (cfg.mode == PipelineMode::DoodleMode);
    vopt.doodle_l = cfg.doodle_l;
    if (cfg.mode == PipelineMode::EpsMode) vopt.eps = cfg.eps;
    vopt.samples = cfg.verify_samples;
    vopt.seed = cfg.seed;
    res.report = verify_level_map(res.level_map, vopt);
    return res;
}

}  // namespace sunco
