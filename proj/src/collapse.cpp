#include "sunco/collapse.hpp"

#include "sunco/geom_kernel.hpp"
#include "sunco/linalg.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <tuple>

namespace sunco {

static std::string cellstr(const Simplex& s) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << "}";
    return os.str();
}

// ---------------------------------------------------------------------------
// replay

ReplayResult verify_collapse(const Complex& ambient, const CollapseSequence& seq,
                             const SimplexSet& from, const SimplexSet& to) {
    ReplayResult res;
    SimplexSet alive = from;
    const auto& cofaces = ambient.coface_index();
    for (size_t i = 0; i < seq.steps.size(); ++i) {
        const Simplex& sigma = seq.steps[i].coface;
        const Simplex& tau = seq.steps[i].free_face;
        auto fail = [&](const std::string& why) {
            res.ok = false;
            res.bad_step = i;
            res.reason = why + " at step " + std::to_string(i) + " (" + cellstr(sigma) + ", " +
                         cellstr(tau) + ")";
            return res;
        };
        if (!alive.count(sigma)) return fail("coface not present");
        if (!alive.count(tau)) return fail("free face not present");
        if (sigma.size() != tau.size() + 1 || !is_face(tau, sigma))
            return fail("not a codimension-1 face pair");
        auto it = cofaces.find(tau);
        if (it != cofaces.end()) {
            for (const Simplex& c : it->second)
                if (c != sigma && alive.count(c)) return fail("free face has another coface");
        }
        alive.erase(sigma);
        alive.erase(tau);
    }
    if (alive != to) {
        res.ok = false;
        res.bad_step = seq.steps.size();
        res.reason = "final complex differs from declared target";
    }
    return res;
}

// ---------------------------------------------------------------------------
// pristine tower peels

static void peel_prism_slab(const ProductComplex& xp, const Simplex& cell, int slab,
                            std::vector<ElementaryStep>& out) {
    int d = sdim(cell);
    // chains P_i over the slab; peel from the slab's top face downward
    auto chain = [&](int i) {
        Simplex s;
        for (int a = 0; a <= i; ++a) s.push_back(xp.vid(cell[static_cast<size_t>(a)], slab));
        for (int a = i; a <= d; ++a) s.push_back(xp.vid(cell[static_cast<size_t>(a)], slab + 1));
        return make_simplex(s);
    };
    Simplex topface;
    for (int a = 0; a <= d; ++a) topface.push_back(xp.vid(cell[static_cast<size_t>(a)], slab + 1));
    out.push_back({chain(0), make_simplex(topface)});
    for (int i = 1; i <= d; ++i) {
        Simplex tau;
        for (int a = 0; a <= i - 1; ++a) tau.push_back(xp.vid(cell[static_cast<size_t>(a)], slab));
        for (int a = i; a <= d; ++a) tau.push_back(xp.vid(cell[static_cast<size_t>(a)], slab + 1));
        out.push_back({chain(i), make_simplex(tau)});
    }
}

CollapseSequence cylindrical_collapse(const ProductComplex& xp, const SimplexSet& y_base) {
    for (const Simplex& s : y_base)
        if (!xp.base.contains(s)) throw Error(Err::NotSubcomplex, "Y outside base");
    std::vector<Simplex> tops;
    for (const Simplex& s : maximal_cells(xp.base.cells))
        if (!y_base.count(s)) tops.push_back(s);
    for (const Simplex& s : xp.base.cells) {
        if (y_base.count(s)) continue;
        bool is_top = std::find(tops.begin(), tops.end(), s) != tops.end();
        if (!is_top)
            throw Error(Err::NotSubcomplex, "base minus Y is not a union of maximal cells");
    }

    CollapseSequence seq;
    seq.from = xp.total.cells;
    int nslabs = static_cast<int>(xp.levels.size()) - 1;
    for (const Simplex& cell : tops)
        for (int slab = nslabs - 1; slab >= 0; --slab) peel_prism_slab(xp, cell, slab, seq.steps);

    SimplexSet alive = seq.from;
    for (const ElementaryStep& st : seq.steps) {
        alive.erase(st.coface);
        alive.erase(st.free_face);
    }
    seq.to = alive;
    SimpleGroup g;
    g.begin = 0;
    g.end = seq.steps.size();
    g.kind = "cylindrical";
    seq.groups.push_back(g);
    seq.filtration = {seq.from, seq.to};
    return seq;
}

// ---------------------------------------------------------------------------
// greedy relative collapse

// Removes every alive cell outside `keep` by elementary pairs, highest
// coface dimension first (then lexicographic). Returns false on a stall.
static bool greedy_clear(const Complex& ambient, SimplexSet& alive, const SimplexSet& keep,
                         std::vector<ElementaryStep>& out) {
    const auto& cofidx = ambient.coface_index();
    auto alive_cofaces = [&](const Simplex& tau) {
        std::vector<Simplex> cs;
        auto it = cofidx.find(tau);
        if (it != cofidx.end())
            for (const Simplex& c : it->second)
                if (alive.count(c)) cs.push_back(c);
        return cs;
    };
    // candidate free pairs keyed for deterministic highest-dimension-first order
    using Key = std::tuple<int, Simplex, Simplex>;
    std::set<Key> cands;
    auto consider = [&](const Simplex& tau) {
        if (!alive.count(tau) || keep.count(tau)) return;
        auto cs = alive_cofaces(tau);
        if (cs.size() == 1 && !keep.count(cs[0]))
            cands.insert({-sdim(cs[0]), cs[0], tau});
    };
    for (const Simplex& s : alive) consider(s);

    while (true) {
        bool removed_any = false;
        while (!cands.empty()) {
            auto [negd, sigma, tau] = *cands.begin();
            cands.erase(cands.begin());
            if (!alive.count(sigma) || !alive.count(tau)) continue;
            auto cs = alive_cofaces(tau);
            if (cs.size() != 1 || cs[0] != sigma) continue;
            alive.erase(sigma);
            alive.erase(tau);
            out.push_back({sigma, tau});
            removed_any = true;
            // facets of sigma may have become free; tau's faces likewise
            for (const Simplex& f : facets_of(sigma)) consider(f);
            for (const Simplex& f : facets_of(tau)) consider(f);
        }
        bool leftover = false;
        for (const Simplex& s : alive)
            if (!keep.count(s)) { leftover = true; break; }
        if (!leftover) return true;
        if (!removed_any) return false;
        // rebuild candidates once in case the incremental updates missed a pair
        for (const Simplex& s : alive) consider(s);
        if (cands.empty()) return false;
    }
}

// ---------------------------------------------------------------------------
// exact 2D polygon triangulation (for the blister surgery refills)

static Rat orient2(const Vec& a, const Vec& b, const Vec& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

static bool in_closed_tri(const Vec& p, const Vec& a, const Vec& b, const Vec& c) {
    Rat d1 = orient2(a, b, p), d2 = orient2(b, c, p), d3 = orient2(c, a, p);
    bool neg = d1 < 0 || d2 < 0 || d3 < 0;
    bool pos = d1 > 0 || d2 > 0 || d3 > 0;
    return !(neg && pos);
}

// ear clipping with exact predicates; indices into pts
static std::vector<std::array<int, 3>> triangulate_polygon(std::vector<int> poly,
                                                           const std::vector<Vec>& pts) {
    std::vector<std::array<int, 3>> tris;
    // orient counterclockwise
    Rat area2 = 0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const Vec& p = pts[static_cast<size_t>(poly[i])];
        const Vec& q = pts[static_cast<size_t>(poly[(i + 1) % poly.size()])];
        area2 += p[0] * q[1] - q[0] * p[1];
    }
    if (area2 == 0) throw Error(Err::Internal, "degenerate polygon");
    if (area2 < 0) std::reverse(poly.begin(), poly.end());

    while (poly.size() > 3) {
        bool clipped = false;
        for (size_t i = 0; i < poly.size(); ++i) {
            int u = poly[(i + poly.size() - 1) % poly.size()];
            int v = poly[i];
            int w = poly[(i + 1) % poly.size()];
            if (!(orient2(pts[static_cast<size_t>(u)], pts[static_cast<size_t>(v)],
                          pts[static_cast<size_t>(w)]) > 0))
                continue;
            bool blocked = false;
            for (int x : poly) {
                if (x == u || x == v || x == w) continue;
                if (in_closed_tri(pts[static_cast<size_t>(x)], pts[static_cast<size_t>(u)],
                                  pts[static_cast<size_t>(v)], pts[static_cast<size_t>(w)])) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) continue;
            tris.push_back({u, v, w});
            poly.erase(poly.begin() + static_cast<long>(i));
            clipped = true;
            break;
        }
        if (!clipped) throw Error(Err::Internal, "polygon triangulation stalled");
    }
    tris.push_back({poly[0], poly[1], poly[2]});
    return tris;
}

// ---------------------------------------------------------------------------
// blister surgery (2-dimensional hosts)

namespace {
struct FiberInfo {
    int up = -1, dn = -1;  // vertical neighbor vertices
};
}  // namespace

static bool same_base(const Host& h, int u, int v) {
    return h.base_pos(u) == h.base_pos(v);
}

static FiberInfo vertical_neighbors(const Host& h, int a) {
    FiberInfo fi;
    for (const Simplex& e : h.cx.cells) {
        if (e.size() != 2) continue;
        int other = -1;
        if (e[0] == a) other = e[1];
        else if (e[1] == a) other = e[0];
        else continue;
        if (!same_base(h, a, other)) continue;
        if (h.level_of(other) > h.level_of(a)) {
            if (fi.up >= 0) throw Error(Err::UnsupportedHost, "multiple rungs above a singular vertex");
            fi.up = other;
        } else {
            if (fi.dn >= 0) throw Error(Err::UnsupportedHost, "multiple rungs below a singular vertex");
            fi.dn = other;
        }
    }
    return fi;
}

// In-plane coordinates for a cell fan living in one prism plane: (parameter
// along the base direction, level). `origin` is the base position of the
// central fiber; `dir` spans the base edge.
static Vec plane_coords(const Host& h, int v, const Vec& origin, const Vec& dir) {
    Vec bp = h.base_pos(v);
    // bp = origin + t * dir; dir has a nonzero coordinate
    Rat t = 0;
    for (size_t c = 0; c < dir.size(); ++c)
        if (dir[c] != 0) { t = (bp[c] - origin[c]) / dir[c]; break; }
    return {t, h.level_of(v)};
}

static int add_host_vertex(Host& h, const Vec& coords, const Vec& pf, const Rat& height, int comp) {
    h.cx.verts.push_back(coords);
    h.pf.push_back(pf);
    h.height.push_back(height);
    h.comp.push_back(comp);
    return static_cast<int>(h.cx.verts.size()) - 1;
}

// One surgery: carve the blister of the singular vertex `a` out of the host.
static Blister carve_blister(Host& h, int a, const Rat& scale) {
    Blister bl;
    bl.a = a;
    Rat lvl = h.level_of(a);
    if (lvl == 0) throw Error(Err::Internal, "blister requested inside X x 0");
    bl.at_top = (lvl == 1);

    FiberInfo fi = vertical_neighbors(h, a);
    if (fi.dn < 0) throw Error(Err::UnsupportedHost, "no rung below singular vertex");
    if (!bl.at_top && fi.up < 0) throw Error(Err::UnsupportedHost, "no rung above singular vertex");

    // star triangles, bucketed by prism plane (base direction from a)
    std::vector<Simplex> star_tris;
    for (const Simplex& s : h.cx.cells)
        if (s.size() == 3 && std::binary_search(s.begin(), s.end(), a)) star_tris.push_back(s);
    if (star_tris.empty()) throw Error(Err::UnsupportedHost, "singular vertex without 2-cells");

    Vec abase = h.base_pos(a);
    auto base_dir = [&](const Simplex& tri) {
        for (int v : tri) {
            if (v == a) continue;
            Vec d = vec_sub(h.base_pos(v), abase);
            bool zero = true;
            for (const Rat& x : d) if (x != 0) zero = false;
            if (!zero) return d;
        }
        throw Error(Err::UnsupportedHost, "vertical 2-cell in host");
    };
    auto same_dir = [](const Vec& d1, const Vec& d2) {
        // positive proportional
        for (size_t i = 1; i < d1.size(); ++i)
            if (d1[0] * d2[i] - d1[i] * d2[0] != 0) return false;
        Rat dot = 0;
        for (size_t i = 0; i < d1.size(); ++i) dot += d1[i] * d2[i];
        return dot > 0;
    };

    // kite side: the prism of the lexicographically smallest star triangle
    Simplex tstar = star_tris[0];
    for (const Simplex& t : star_tris)
        if (t < tstar) tstar = t;
    Vec kite_dir = base_dir(tstar);

    std::vector<Simplex> kite_side, other_side;
    for (const Simplex& t : star_tris)
        (same_dir(base_dir(t), kite_dir) ? kite_side : other_side).push_back(t);

    // new vertices: a_up / a_dn on the rung edges, a_to toward t*'s barycenter
    auto lerp_vertex = [&](int from, int to, const Rat& s) {
        Vec pos = vec_lerp(h.cx.coords(from), h.cx.coords(to), s);
        Vec pf = vec_lerp(h.pf[static_cast<size_t>(from)], h.pf[static_cast<size_t>(to)], s);
        Rat ht = h.height[static_cast<size_t>(from)] +
                 s * (h.height[static_cast<size_t>(to)] - h.height[static_cast<size_t>(from)]);
        return add_host_vertex(h, pos, pf, ht, h.comp[static_cast<size_t>(from)]);
    };
    bl.a_dn = lerp_vertex(a, fi.dn, scale);
    bl.a_up = bl.at_top ? a : lerp_vertex(a, fi.up, scale);
    {
        Vec bc = h.cx.barycenter(tstar);
        Vec pos = vec_lerp(h.cx.coords(a), bc, scale);
        Vec pf(h.pf[0].size(), Rat(0));
        Rat ht = 0;
        for (int v : tstar) {
            for (size_t c = 0; c < pf.size(); ++c) pf[c] += h.pf[static_cast<size_t>(v)][c];
            ht += h.height[static_cast<size_t>(v)];
        }
        pf = vec_scale(Rat(1, 3), pf);
        ht /= 3;
        pf = vec_lerp(h.pf[static_cast<size_t>(a)], pf, scale);
        ht = h.height[static_cast<size_t>(a)] + scale * (ht - h.height[static_cast<size_t>(a)]);
        bl.a_to = add_host_vertex(h, pos, pf, ht, h.comp[static_cast<size_t>(a)]);
    }

    // ------------------------------------------------------------------
    // rebuild around a: remove the star, re-add the untouched other side
    // with split wall edges, the kite, and the refilled kite-side polygon

    // link cycle pieces per side: walk the link edges of each side's fan
    auto link_arc = [&](const std::vector<Simplex>& tris) {
        // edges opposite a within each triangle form a path; order it
        std::vector<std::pair<int, int>> segs;
        for (const Simplex& t : tris) {
            std::vector<int> rest;
            for (int v : t)
                if (v != a) rest.push_back(v);
            segs.push_back({rest[0], rest[1]});
        }
        std::map<int, std::vector<int>> adj;
        for (auto& [u, v] : segs) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        int start = -1;
        for (auto& [v, nb] : adj)
            if (nb.size() == 1) {
                if (start < 0 || v < start) start = v;
            }
        if (start < 0) throw Error(Err::UnsupportedHost, "closed one-sided link around a singular vertex");
        std::vector<int> path{start};
        int prev = -1, cur = start;
        while (true) {
            int nxt = -1;
            for (int cand : adj[cur])
                if (cand != prev) { nxt = cand; break; }
            if (nxt < 0) break;
            path.push_back(nxt);
            prev = cur;
            cur = nxt;
            if (adj[cur].size() == 1) break;
        }
        return path;
    };

    // the kite-side arc runs from the top rung (or a's top-edge neighbor when
    // at the top) down to the bottom rung
    std::vector<int> arc = link_arc(kite_side);
    int arc_top_expect = bl.at_top ? -1 : fi.up;
    if (!bl.at_top) {
        if (arc.front() == arc_top_expect) {
        } else if (arc.back() == arc_top_expect) {
            std::reverse(arc.begin(), arc.end());
        } else {
            throw Error(Err::UnsupportedHost, "kite-side link does not reach the upper rung");
        }
        if (arc.back() != fi.dn)
            throw Error(Err::UnsupportedHost, "kite-side link does not reach the lower rung");
    } else {
        if (arc.back() == fi.dn) {
        } else if (arc.front() == fi.dn) {
            std::reverse(arc.begin(), arc.end());
        } else {
            throw Error(Err::UnsupportedHost, "kite-side link does not reach the lower rung");
        }
        // arc.front() is a's neighbor along X x 1 in this prism
    }

    // carve: remove all cells containing a, and the rung edges to be split
    std::vector<Simplex> to_remove;
    for (const Simplex& s : h.cx.cells)
        if (std::binary_search(s.begin(), s.end(), a)) to_remove.push_back(s);
    for (const Simplex& s : to_remove) h.cx.cells.erase(s);
    h.cx.invalidate_cache();

    std::vector<Simplex> gens;
    // other side: original fans with the rung edges split at a_up / a_dn
    for (const Simplex& t : other_side) {
        std::vector<int> rest;
        for (int v : t)
            if (v != a) rest.push_back(v);
        bool has_up = !bl.at_top && (rest[0] == fi.up || rest[1] == fi.up);
        bool has_dn = (rest[0] == fi.dn || rest[1] == fi.dn);
        if (has_up) {
            int x = (rest[0] == fi.up) ? rest[1] : rest[0];
            gens.push_back(make_simplex({a, bl.a_up, x}));
            gens.push_back(make_simplex({bl.a_up, fi.up, x}));
        } else if (has_dn) {
            int x = (rest[0] == fi.dn) ? rest[1] : rest[0];
            gens.push_back(make_simplex({a, bl.a_dn, x}));
            gens.push_back(make_simplex({bl.a_dn, fi.dn, x}));
        } else {
            gens.push_back(make_simplex({a, rest[0], rest[1]}));
        }
    }
    // the kite
    if (!bl.at_top) gens.push_back(make_simplex({bl.a_up, a, bl.a_to}));
    gens.push_back(make_simplex({a, bl.a_dn, bl.a_to}));

    // kite-side refill polygon: wall (subdivided) + kite outer edges + arc
    {
        Vec origin = abase;
        std::vector<int> poly;
        if (bl.at_top) {
            // boundary: a -> top neighbor -> arc -> dn rung -> a_dn -> a_to -> a
            poly.push_back(a);
            for (int v : arc) poly.push_back(v);
            poly.push_back(bl.a_dn);
            poly.push_back(bl.a_to);
        } else {
            poly.push_back(bl.a_up);
            poly.push_back(fi.up);
            for (size_t i = 1; i + 1 < arc.size(); ++i) poly.push_back(arc[i]);
            poly.push_back(fi.dn);
            poly.push_back(bl.a_dn);
            poly.push_back(bl.a_to);
        }
        std::vector<Vec> pcoords(h.cx.verts.size());
        for (int v : poly) pcoords[static_cast<size_t>(v)] = plane_coords(h, v, origin, kite_dir);
        std::vector<int> poly_idx = poly;
        std::vector<Vec> pts(h.cx.verts.size(), Vec{Rat(0), Rat(0)});
        for (int v : poly) pts[static_cast<size_t>(v)] = pcoords[static_cast<size_t>(v)];
        for (auto& tri : triangulate_polygon(poly_idx, pts))
            gens.push_back(make_simplex({tri[0], tri[1], tri[2]}));
    }
    // rung edges of the other side are re-added via the split fans; if the
    // other side is empty (boundary fiber), re-add the split rungs directly
    gens.push_back(make_simplex({a, bl.a_dn}));
    gens.push_back(make_simplex({bl.a_dn, fi.dn}));
    if (!bl.at_top) {
        gens.push_back(make_simplex({a, bl.a_up}));
        gens.push_back(make_simplex({bl.a_up, fi.up}));
    }

    for (const Simplex& g : gens)
        for (Simplex& f : all_faces(g)) h.cx.cells.insert(std::move(f));
    h.cx.invalidate_cache();

    // blister complex bookkeeping
    std::vector<Simplex> jgens;
    if (!bl.at_top) jgens.push_back(make_simplex({bl.a_up, a, bl.a_to}));
    jgens.push_back(make_simplex({a, bl.a_dn, bl.a_to}));
    bl.J = face_closure(jgens);
    bl.K = face_closure(bl.at_top
                            ? std::vector<Simplex>{make_simplex({a, bl.a_dn})}
                            : std::vector<Simplex>{make_simplex({a, bl.a_up}),
                                                   make_simplex({a, bl.a_dn})});
    std::vector<Simplex> lgens{make_simplex({bl.a_dn, bl.a_to})};
    if (!bl.at_top) lgens.push_back(make_simplex({bl.a_up, bl.a_to}));
    else lgens.push_back(make_simplex({a, bl.a_to}));
    bl.L = face_closure(lgens);

    // collapse of the blister onto its good face
    if (!bl.at_top) {
        bl.steps.push_back({make_simplex({bl.a_up, a, bl.a_to}), make_simplex({a, bl.a_up})});
        bl.steps.push_back({make_simplex({a, bl.a_dn, bl.a_to}), make_simplex({a, bl.a_dn})});
        bl.steps.push_back({make_simplex({a, bl.a_to}), Simplex{a}});
    } else {
        bl.steps.push_back({make_simplex({a, bl.a_dn, bl.a_to}), make_simplex({a, bl.a_dn})});
    }
    return bl;
}

BlisterSet build_blisters(const Host& h) {
    BlisterSet bs;
    bs.host = h;
    std::vector<Simplex> sing_max = maximal_cells(h.sing);
    std::vector<int> targets;
    for (const Simplex& s : sing_max) {
        if (h.bottom.count(s)) continue;
        if (s.size() != 1) {
            if (h.cx.dim() > 2)
                throw Error(Err::UnsupportedHost,
                            "blisters over positive-dimensional singular cells need a "
                            "2-dimensional host");
            throw Error(Err::NondegeneracyViolated,
                        "singular cell of positive dimension in a 2-dimensional host");
        }
        targets.push_back(s[0]);
    }
    std::sort(targets.begin(), targets.end());

    for (int a : targets) {
        bool placed = false;
        for (Rat scale(1, 2); !placed; scale /= 2) {
            if (denominator(scale) > 10000)
                throw Error(Err::Internal, "blister scale loop exhausted");
            Host trial = bs.host;
            Blister bl;
            try {
                bl = carve_blister(trial, a, scale);
            } catch (const Error& e) {
                if (e.code() == Err::UnsupportedHost || e.code() == Err::NondegeneracyViolated)
                    throw;
                continue;
            }
            // smallness: the blister must stay clear of every other singular
            // vertex and of every previously placed blister
            bool small_enough = true;
            for (const Simplex& s : trial.sing) {
                if (s.size() != 1 || s[0] == a) continue;
                for (const Simplex& jcell : bl.J) {
                    if (jcell.size() != 3) continue;
                    std::vector<Vec> tri = trial.cx.cell_points(jcell);
                    std::vector<Vec> pt{trial.cx.coords(s[0])};
                    if (hull_common_point(tri, pt)) { small_enough = false; break; }
                }
                if (!small_enough) break;
            }
            for (const Blister& prev : bs.blisters) {
                if (!small_enough) break;
                for (const Simplex& jc : bl.J) {
                    if (jc.size() < 2) continue;
                    for (const Simplex& pc : prev.J) {
                        if (pc.size() < 2) continue;
                        if (hull_common_point(trial.cx.cell_points(jc), trial.cx.cell_points(pc))) {
                            small_enough = false;
                            break;
                        }
                    }
                    if (!small_enough) break;
                }
            }
            if (!small_enough) continue;
            bs.host = std::move(trial);
            bs.phi[a] = bl.a_to;
            bs.blisters.push_back(std::move(bl));
            placed = true;
        }
    }
    return bs;
}

// ---------------------------------------------------------------------------
// sunny collapse

static SimplexSet vertical_cells(const Host& h) {
    SimplexSet out;
    for (const Simplex& s : h.cx.cells) {
        bool vertical = true;
        for (size_t i = 1; i < s.size() && vertical; ++i)
            if (!same_base(h, s[0], s[static_cast<size_t>(i)])) vertical = false;
        if (vertical) out.insert(s);
    }
    return out;
}

static void certify_group(const Host& h, CollapseSequence& seq, size_t gi, const Mode& mode) {
    SimpleGroup& g = seq.groups[gi];
    g.cert = certify_step(h, seq.filtration[gi], seq.filtration[gi + 1], mode, false);
    if (!g.cert.verdict)
        throw Error(Err::Internal, "sunny certificate failed for group " + g.kind);
}

CollapseSequence sunny_collapse(const Host& h, const SunnyOptions& opt, Host& host_out) {
    int n = h.dim_x();
    bool have_sing_off_bottom = false;
    for (const Simplex& s : maximal_cells(h.sing))
        if (!h.bottom.count(s)) have_sing_off_bottom = true;

    CollapseSequence seq;
    if (!have_sing_off_bottom) {
        // pure skeleton peel: greedy relative collapses through the dimension
        // filtration; with no shadow sources every group certifies vacuously
        host_out = h;
        seq.from = h.cx.cells;
        SimplexSet alive = h.cx.cells;
        seq.filtration.push_back(alive);
        for (int d = n; d >= 1; --d) {
            // clear everything lying over base cells of dimension >= d
            SimplexSet keep = h.bottom;
            for (const Simplex& s : alive) {
                Simplex base_img;
                // cells over lower-dimensional base cells stay
                std::set<Vec> bases;
                for (int v : s) bases.insert(h.base_pos(v));
                if (static_cast<int>(bases.size()) <= d) keep.insert(s);
            }
            for (const Simplex& s : h.bottom) keep.insert(s);
            std::vector<ElementaryStep> steps;
            if (!greedy_clear(h.cx, alive, keep, steps))
                throw Error(Err::Internal, "cylindrical peel stalled");
            SimpleGroup g;
            g.begin = seq.steps.size();
            seq.steps.insert(seq.steps.end(), steps.begin(), steps.end());
            g.end = seq.steps.size();
            g.kind = (d == n) ? "cylindrical" : "base";
            seq.groups.push_back(g);
            seq.filtration.push_back(alive);
        }
        {
            // fibers down to X x 0
            std::vector<ElementaryStep> steps;
            if (!greedy_clear(h.cx, alive, h.bottom, steps))
                throw Error(Err::Internal, "fiber peel stalled");
            SimpleGroup g;
            g.begin = seq.steps.size();
            seq.steps.insert(seq.steps.end(), steps.begin(), steps.end());
            g.end = seq.steps.size();
            g.kind = seq.groups.empty() ? "cylindrical" : "base";
            seq.groups.push_back(g);
            seq.filtration.push_back(alive);
        }
        seq.to = h.bottom;
        for (size_t gi = 0; gi < seq.groups.size(); ++gi) certify_group(host_out, seq, gi, opt.mode);
        return seq;
    }

    if (n != 1 || h.cx.dim() != 2)
        throw Error(Err::UnsupportedHost,
                    "nonempty singular sets are supported for 2-dimensional hosts only");

    // build blisters over the singular vertices, then order them
    BlisterSet bs = build_blisters(h);
    host_out = bs.host;
    const Host& hb = host_out;

    std::vector<Simplex> blistered;
    for (const Blister& b : bs.blisters) blistered.push_back(Simplex{b.a});
    OrderResult ord = overshadow_order(hb, blistered, opt.mode);
    if (!ord.ok) {
        std::ostringstream os;
        os << "overshadow cycle among singular cells:";
        for (const Simplex& s : ord.cycle) os << " " << cellstr(s);
        os << "; re-run the perturbation with a fresh seed";
        throw Error(Err::OvershadowCycle, os.str());
    }

    seq.from = hb.cx.cells;
    SimplexSet alive = hb.cx.cells;
    seq.filtration.push_back(alive);

    // cylindrical phase: clear prism interiors, keep walls + blisters + X x 0
    {
        SimplexSet keep = hb.bottom;
        for (const Simplex& s : vertical_cells(hb)) keep.insert(s);
        for (const Blister& b : bs.blisters)
            for (const Simplex& s : b.J) keep.insert(s);
        std::vector<ElementaryStep> steps;
        if (!greedy_clear(hb.cx, alive, keep, steps))
            throw Error(Err::Internal, "cylindrical phase stalled");
        SimpleGroup g;
        g.begin = 0;
        seq.steps = std::move(steps);
        g.end = seq.steps.size();
        g.kind = "cylindrical";
        seq.groups.push_back(g);
        seq.filtration.push_back(alive);
    }

    // blister phase, in overshadow order
    std::map<int, const Blister*> by_vertex;
    for (const Blister& b : bs.blisters) by_vertex[b.a] = &b;
    for (const Simplex& s : ord.order) {
        const Blister& b = *by_vertex.at(s[0]);
        SimpleGroup g;
        g.begin = seq.steps.size();
        for (const ElementaryStep& st : b.steps) {
            alive.erase(st.coface);
            alive.erase(st.free_face);
            seq.steps.push_back(st);
        }
        g.end = seq.steps.size();
        g.kind = "blister";
        seq.groups.push_back(g);
        seq.filtration.push_back(alive);
    }

    // recursion on the punctured walls: everything left is fiber paths with
    // good-face detours, peeled down to X x 0
    {
        std::vector<ElementaryStep> steps;
        if (!greedy_clear(hb.cx, alive, hb.bottom, steps))
            throw Error(Err::Internal, "wall recursion stalled");
        SimpleGroup g;
        g.begin = seq.steps.size();
        seq.steps.insert(seq.steps.end(), steps.begin(), steps.end());
        g.end = seq.steps.size();
        g.kind = "base";
        seq.groups.push_back(g);
        seq.filtration.push_back(alive);
    }
    seq.to = hb.bottom;

    ReplayResult rr = verify_collapse(hb.cx, seq, seq.from, seq.to);
    if (!rr.ok) throw Error(Err::Internal, "sunny collapse replay failed: " + rr.reason);
    for (size_t gi = 0; gi < seq.groups.size(); ++gi) certify_group(hb, seq, gi, opt.mode);
    return seq;
}

// ---------------------------------------------------------------------------
// neighborhood collapse (Sublemma 4.3 transport)

CollapseSequence neighborhood_collapse(const DerivedComplex& dc, const CollapseSequence& seq,
                                       const SimplexSet& from) {
    {
        CollapseSequence probe = seq;
        ReplayResult rr = verify_collapse(dc.original, probe, from, seq.to);
        if (!rr.ok) throw Error(Err::InvalidSourceCollapse, rr.reason);
    }
    CollapseSequence out;
    SimplexSet v = from;
    SimplexSet nv = derived_neighborhood(dc, v);
    out.from = nv;
    out.filtration.push_back(nv);

    size_t group_idx = 0;
    size_t group_begin = 0;
    for (size_t i = 0; i < seq.steps.size(); ++i) {
        SimplexSet w = v;
        w.erase(seq.steps[i].coface);
        w.erase(seq.steps[i].free_face);
        SimplexSet nw = derived_neighborhood(dc, w);
        if (!greedy_clear(dc.result, nv, nw, out.steps))
            throw Error(Err::Internal, "neighborhood collapse stalled");
        v = std::move(w);
        // nv has been mutated down to nw by greedy_clear
        while (group_idx < seq.groups.size() && i + 1 == seq.groups[group_idx].end) {
            SimpleGroup g;
            g.begin = group_begin;
            g.end = out.steps.size();
            g.kind = "nbhd";
            out.groups.push_back(g);
            out.filtration.push_back(nv);
            group_begin = out.steps.size();
            ++group_idx;
        }
    }
    if (out.groups.empty() && !out.steps.empty()) {
        SimpleGroup g;
        g.begin = 0;
        g.end = out.steps.size();
        g.kind = "nbhd";
        out.groups.push_back(g);
        out.filtration.push_back(nv);
    }
    out.to = nv;
    return out;
}

// ---------------------------------------------------------------------------
// stabilization (Lemma 4.1 / Lemma 6.1)

StabilizeResult stabilize(const Host& h, const CollapseSequence& seq, const Mode& mode,
                          const Rat& shift) {
    {
        CollapseSequence probe = seq;
        ReplayResult rr = verify_collapse(h.cx, probe, seq.from, seq.to);
        if (!rr.ok) throw Error(Err::InvalidSequence, rr.reason);
    }
    StabilizeResult res;
    res.lagging = lagging_second_derived(h.cx, h.height, shift);
    res.host = derive_host(h, res.lagging.dc);

    res.seq = neighborhood_collapse(res.lagging.dc, seq, seq.from);

    // final collapse: the regular neighborhood of X x 0 onto X x 0 itself
    SimplexSet alive = res.seq.to;
    SimplexSet bottom2 = res.lagging.dc.induced(h.bottom);
    {
        std::vector<ElementaryStep> steps;
        if (!greedy_clear(res.host.cx, alive, bottom2, steps))
            throw Error(Err::Internal, "regular neighborhood collapse stalled");
        SimpleGroup g;
        g.begin = res.seq.steps.size();
        res.seq.steps.insert(res.seq.steps.end(), steps.begin(), steps.end());
        g.end = res.seq.steps.size();
        g.kind = "final";
        res.seq.groups.push_back(g);
        res.seq.filtration.push_back(alive);
        res.seq.to = bottom2;
    }

    for (size_t gi = 0; gi < res.seq.groups.size(); ++gi) {
        SimpleGroup& g = res.seq.groups[gi];
        g.cert = certify_step(res.host, res.seq.filtration[gi], res.seq.filtration[gi + 1], mode,
                              /*stable=*/true);
        if (!g.cert.verdict) {
            std::ostringstream os;
            os << "stable certificate failed for group " << gi;
            if (g.cert.violation)
                os << ": " << cellstr(g.cert.violation->a) << " overshadows "
                   << cellstr(g.cert.violation->b);
            throw Error(Err::StabilizationCertificateFailed, os.str());
        }
    }
    return res;
}

}  // namespace sunco
