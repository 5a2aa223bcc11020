#include "sunco/subdivide.hpp"

#include "sunco/linalg.hpp"

#include <algorithm>

namespace sunco {

static std::vector<Simplex> cells_by_dim(const Complex& k) {
    std::vector<Simplex> cs(k.cells.begin(), k.cells.end());
    std::stable_sort(cs.begin(), cs.end(),
                     [](const Simplex& a, const Simplex& b) { return a.size() < b.size(); });
    return cs;
}

DerivedComplex derived(const Complex& k, const Schedule& sched) {
    DerivedComplex dc;
    dc.original = k;
    dc.result.ambient_dim = k.ambient_dim;

    std::map<Simplex, int> vid;
    std::vector<Simplex> order = cells_by_dim(k);
    for (const Simplex& s : order) {
        Vec pt;
        if (s.size() == 1) {
            pt = k.coords(s[0]);
        } else {
            auto it = sched.find(s);
            if (it == sched.end())
                throw Error(Err::ParseError, "derivation schedule misses a cell");
            pt = it->second;
            auto lam = barycentric_coords(k.cell_points(s), pt);
            if (!lam) throw Error(Err::DerivationPointOutsideInterior, "off the cell's affine hull");
            for (const Rat& l : *lam)
                if (!(l > 0)) throw Error(Err::DerivationPointOutsideInterior, "not strictly interior");
        }
        vid[s] = static_cast<int>(dc.result.verts.size());
        dc.result.verts.push_back(std::move(pt));
        dc.vertex_carrier.push_back(s);
    }

    // maximal result cells = full flags through maximal original cells,
    // one per vertex ordering
    std::vector<Simplex> gens;
    for (const Simplex& m : maximal_cells(k.cells)) {
        std::vector<int> perm(m.begin(), m.end());
        std::sort(perm.begin(), perm.end());
        do {
            Simplex chain_cell;
            Simplex prefix;
            for (int v : perm) {
                prefix = simplex_union(prefix, {v});
                chain_cell.push_back(vid.at(prefix));
            }
            gens.push_back(make_simplex(chain_cell));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    dc.result.cells = face_closure(gens);
    return dc;
}

DerivedComplex barycentric(const Complex& k) {
    Schedule sched;
    for (const Simplex& s : k.cells)
        if (s.size() >= 2) sched[s] = k.barycenter(s);
    return derived(k, sched);
}

static DerivedComplex compose(const DerivedComplex& first, const DerivedComplex& second) {
    // second.original == first.result
    DerivedComplex dc;
    dc.original = first.original;
    dc.result = second.result;
    dc.vertex_carrier.reserve(second.vertex_carrier.size());
    for (const Simplex& mid : second.vertex_carrier)
        dc.vertex_carrier.push_back(first.carrier(mid));
    return dc;
}

DerivedComplex second_derived(const Complex& k) {
    DerivedComplex d1 = barycentric(k);
    DerivedComplex d2 = barycentric(d1.result);
    return compose(d1, d2);
}

Lagging lagging_second_derived(const Complex& k, const std::vector<Rat>& vertex_height,
                               const Rat& shift) {
    if (vertex_height.size() != k.verts.size())
        throw Error(Err::ParseError, "height vector length mismatch");
    if (!(shift > 0)) throw Error(Err::NonPositiveCenterValue, "shift must be positive");

    Lagging lag;
    lag.shift = shift;
    for (const Simplex& s : k.cells) {
        Rat h = 0;
        for (int v : s) h += vertex_height[static_cast<size_t>(v)];
        lag.center_height[s] = h / Rat(static_cast<long>(s.size()));
    }

    DerivedComplex d1 = barycentric(k);

    // derivation points for the cells of K', in order of increasing dimension
    // of their K-carrier; each cell with carrier A_j is a_j * B and its point
    // sits on the segment from the barycenter a_j toward B's point, at the
    // zero of the height function.
    Schedule sched;
    std::map<Simplex, Vec> point_of;  // K'-cell -> its derivation point
    for (size_t v = 0; v < d1.result.verts.size(); ++v)
        point_of[Simplex{static_cast<int>(v)}] = d1.result.coords(static_cast<int>(v));

    std::vector<Simplex> order = cells_by_dim(d1.result);
    for (const Simplex& tau : order) {
        if (tau.size() < 2) continue;
        Simplex aj = d1.carrier(tau);
        Rat cj = lag.center_height.at(aj) + shift;
        if (!(cj > 0))
            throw Error(Err::NonPositiveCenterValue, "center height below -shift");
        // the chain's top vertex is the barycenter of aj; the rest is B
        int top_vertex = -1;
        Simplex rest;
        for (int v : tau) {
            if (d1.vertex_carrier[static_cast<size_t>(v)] == aj) top_vertex = v;
            else rest.push_back(v);
        }
        if (top_vertex < 0) throw Error(Err::Internal, "chain without top vertex");
        Vec a = d1.result.coords(top_vertex);
        Vec b = point_of.at(make_simplex(rest));
        Rat s = cj / (cj + 1);
        Vec pt = vec_lerp(a, b, s);
        point_of[tau] = pt;
        sched[tau] = std::move(pt);
    }

    DerivedComplex d2 = derived(d1.result, sched);
    lag.dc = compose(d1, d2);
    return lag;
}

SimplexSet derived_neighborhood(const DerivedComplex& dc, const SimplexSet& L) {
    for (const Simplex& s : L) {
        if (!dc.original.contains(s)) throw Error(Err::NotSubcomplex, "L outside original");
        for (const Simplex& f : facets_of(s))
            if (!L.count(f)) throw Error(Err::NotSubcomplex, "L not face-closed");
    }
    std::vector<Simplex> gens;
    for (const Simplex& s : dc.result.cells) {
        bool meets = false;
        for (int v : s)
            if (L.count(dc.vertex_carrier[static_cast<size_t>(v)])) { meets = true; break; }
        if (meets) gens.push_back(s);
    }
    return face_closure(gens);
}

PointClass classify_point(const Vec& x, const SimplexSet& L, const Lagging& lag) {
    const Complex& k = lag.dc.original;
    auto car = carrier_of_point(k, x);
    if (!car) throw Error(Err::PointOutsideComplex, "classify_point");
    if (L.count(*car)) return PointClass::InL;
    if (car->size() == 1) return PointClass::Outside;  // vertices off L are never in N

    std::vector<Vec> pts = k.cell_points(*car);
    auto lam = barycentric_coords(pts, x);
    int n = static_cast<int>(car->size());
    Rat c(1, static_cast<long>(n));
    // radial exit point from the barycenter through x
    Rat tstar;
    bool have = false;
    for (int i = 0; i < n; ++i) {
        if ((*lam)[static_cast<size_t>(i)] < c) {
            Rat t = c / (c - (*lam)[static_cast<size_t>(i)]);
            if (!have || t < tstar) { tstar = t; have = true; }
        }
    }
    if (!have) return PointClass::Outside;  // x is the barycenter; f > 0 there
    Vec px(pts[0].size(), Rat(0));
    for (int i = 0; i < n; ++i) {
        Rat coeff = c + tstar * ((*lam)[static_cast<size_t>(i)] - c);
        for (size_t cc = 0; cc < px.size(); ++cc) px[cc] += coeff * pts[static_cast<size_t>(i)][cc];
    }
    // x = c_x + s (p_x - c_x) with s = 1/tstar; f = (1-s) f(c_x) + s (-1)
    Rat s = 1 / tstar;
    Rat fc = lag.center_height.at(*car) + lag.shift;
    Rat fval = (1 - s) * fc - s;

    PointClass sub = classify_point(px, L, lag);
    bool px_in_n = sub != PointClass::Outside;
    bool px_in_int = sub == PointClass::InL || sub == PointClass::InIntNMinusL;
    if (px_in_int && fval < 0) return PointClass::InIntNMinusL;
    if (px_in_n && fval <= 0) return PointClass::InNMinusL;
    return PointClass::Outside;
}

Host derive_host(const Host& h, const DerivedComplex& dc) {
    Host out;
    out.cx = dc.result;
    size_t n = dc.result.verts.size();
    out.pf.resize(n);
    out.height.resize(n);
    out.comp.resize(n);
    for (size_t v = 0; v < n; ++v) {
        const Simplex& car = dc.vertex_carrier[v];
        auto lam = barycentric_coords(h.cx.cell_points(car), dc.result.coords(static_cast<int>(v)));
        if (!lam) throw Error(Err::Internal, "derived vertex off its carrier");
        Vec pf(h.pf[0].size(), Rat(0));
        Rat ht = 0;
        for (size_t i = 0; i < car.size(); ++i) {
            for (size_t c = 0; c < pf.size(); ++c)
                pf[c] += (*lam)[i] * h.pf[static_cast<size_t>(car[i])][c];
            ht += (*lam)[i] * h.height[static_cast<size_t>(car[i])];
        }
        out.pf[v] = std::move(pf);
        out.height[v] = ht;
        out.comp[v] = h.comp[static_cast<size_t>(car[0])];
    }
    out.sing = dc.induced(h.sing);
    out.bottom = dc.induced(h.bottom);
    out.top = dc.induced(h.top);
    return out;
}

}  // namespace sunco
