#include "sunco/complex.hpp"

#include "sunco/linalg.hpp"
#include "sunco/lp.hpp"

#include <algorithm>
#include <sstream>

namespace sunco {

static std::string simplex_str(const Simplex& s) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << "}";
    return os.str();
}

Simplex make_simplex(std::vector<int> verts) {
    std::sort(verts.begin(), verts.end());
    for (size_t i = 1; i < verts.size(); ++i)
        if (verts[i] == verts[i - 1])
            throw Error(Err::DegenerateSimplex, "repeated vertex in " + simplex_str(verts));
    return verts;
}

bool is_face(const Simplex& a, const Simplex& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Simplex simplex_union(const Simplex& a, const Simplex& b) {
    Simplex r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

Simplex simplex_intersect(const Simplex& a, const Simplex& b) {
    Simplex r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

Simplex simplex_minus(const Simplex& a, const Simplex& b) {
    Simplex r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

std::vector<Simplex> all_faces(const Simplex& s) {
    std::vector<Simplex> out;
    int n = static_cast<int>(s.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        Simplex f;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) f.push_back(s[i]);
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<Simplex> facets_of(const Simplex& s) {
    std::vector<Simplex> out;
    if (s.size() <= 1) return out;
    for (size_t i = 0; i < s.size(); ++i) {
        Simplex f;
        for (size_t j = 0; j < s.size(); ++j)
            if (j != i) f.push_back(s[j]);
        out.push_back(std::move(f));
    }
    return out;
}

SimplexSet face_closure(const std::vector<Simplex>& generators) {
    SimplexSet out;
    for (const Simplex& g : generators)
        for (Simplex& f : all_faces(g)) out.insert(std::move(f));
    return out;
}

std::vector<Simplex> maximal_cells(const SimplexSet& cells) {
    std::vector<Simplex> out;
    for (const Simplex& s : cells) {
        bool maximal = true;
        for (const Simplex& t : cells) {
            if (t.size() > s.size() && is_face(s, t)) { maximal = false; break; }
        }
        if (maximal) out.push_back(s);
    }
    return out;
}

int Complex::dim() const {
    int d = -1;
    for (const Simplex& s : cells) d = std::max(d, sdim(s));
    return d;
}

std::vector<Vec> Complex::cell_points(const Simplex& s) const {
    std::vector<Vec> pts;
    pts.reserve(s.size());
    for (int v : s) pts.push_back(verts[static_cast<size_t>(v)]);
    return pts;
}

Vec Complex::barycenter(const Simplex& s) const {
    Vec b(ambient_dim, Rat(0));
    for (int v : s) b = vec_add(b, verts[static_cast<size_t>(v)]);
    Rat inv = Rat(1, static_cast<long>(s.size()));
    return vec_scale(inv, b);
}

const std::map<Simplex, std::vector<Simplex>>& Complex::coface_index() const {
    if (coface_cache_.empty() && !cells.empty()) {
        for (const Simplex& s : cells)
            for (Simplex& f : facets_of(s)) coface_cache_[std::move(f)].push_back(s);
    }
    return coface_cache_;
}

std::vector<Simplex> Complex::cofaces_of(const Simplex& s) const {
    std::vector<Simplex> out;
    for (const Simplex& t : cells)
        if (t.size() > s.size() && is_face(s, t)) out.push_back(t);
    return out;
}

Subcomplex make_subcomplex(const Complex& parent, const std::vector<Simplex>& generators) {
    Subcomplex sc;
    sc.parent = &parent;
    sc.cells = face_closure(generators);
    for (const Simplex& s : sc.cells)
        if (!parent.contains(s))
            throw Error(Err::NotSubcomplex, "simplex " + simplex_str(s) + " not in parent");
    return sc;
}

Complex build_complex(const std::vector<Vec>& vertex_coords,
                      const std::vector<std::vector<int>>& facets) {
    Complex k;
    k.verts = vertex_coords;
    k.ambient_dim = vertex_coords.empty() ? 0 : static_cast<int>(vertex_coords[0].size());
    for (const Vec& v : vertex_coords)
        if (static_cast<int>(v.size()) != k.ambient_dim)
            throw Error(Err::ParseError, "inconsistent coordinate length");
    std::vector<Simplex> gens;
    for (const std::vector<int>& f : facets) {
        for (int v : f)
            if (v < 0 || v >= static_cast<int>(vertex_coords.size()))
                throw Error(Err::ParseError, "vertex index out of range");
        Simplex s = make_simplex(f);  // throws on repeats
        if (!affinely_independent(k.cell_points(s)))
            throw Error(Err::DegenerateSimplex, "affinely dependent facet " + simplex_str(s));
        gens.push_back(std::move(s));
    }
    k.cells = face_closure(gens);
    return k;
}

// Do the relative interiors of two cells meet? Decided by maximizing the
// smallest barycentric coordinate over the common-point polytope.
static bool interiors_meet(const Complex& k, const Simplex& a, const Simplex& b) {
    int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
    int d = k.ambient_dim;
    StandardLP lp(na + nb + 1);  // alphas, betas, t
    int ti = na + nb;
    for (int c = 0; c < d; ++c) {
        std::vector<Rat> row(na + nb + 1, Rat(0));
        for (int i = 0; i < na; ++i) row[i] = k.coords(a[i])[c];
        for (int j = 0; j < nb; ++j) row[na + j] = -k.coords(b[j])[c];
        lp.add_eq(row, Rat(0));
    }
    std::vector<Rat> suma(na + nb + 1, Rat(0)), sumb(na + nb + 1, Rat(0));
    for (int i = 0; i < na; ++i) suma[i] = 1;
    for (int j = 0; j < nb; ++j) sumb[na + j] = 1;
    lp.add_eq(suma, Rat(1));
    lp.add_eq(sumb, Rat(1));
    for (int i = 0; i < na; ++i) {
        std::vector<Rat> row(lp.num_vars(), Rat(0));
        row[i] = 1; row[ti] = -1;
        lp.add_ge(row, Rat(0));
    }
    for (int j = 0; j < nb; ++j) {
        std::vector<Rat> row(lp.num_vars(), Rat(0));
        row[na + j] = 1; row[ti] = -1;
        lp.add_ge(row, Rat(0));
    }
    std::vector<Rat> obj(lp.num_vars(), Rat(0));
    obj[ti] = 1;
    LPSolution s = lp.maximize(obj);
    return s.feasible && s.value > 0;
}

void check_interior_disjoint(const Complex& k) {
    std::vector<Simplex> cs(k.cells.begin(), k.cells.end());
    for (size_t i = 0; i < cs.size(); ++i) {
        for (size_t j = i + 1; j < cs.size(); ++j) {
            if (interiors_meet(k, cs[i], cs[j]))
                throw Error(Err::OverlappingInteriors,
                            simplex_str(cs[i]) + " and " + simplex_str(cs[j]));
        }
    }
}

std::pair<Subcomplex, Subcomplex> star_link(const Complex& k, const Simplex& s) {
    if (!k.contains(s)) throw Error(Err::SimplexNotFound, simplex_str(s));
    Subcomplex star, link;
    star.parent = &k;
    link.parent = &k;
    std::vector<Simplex> star_gens;
    for (const Simplex& t : k.cells)
        if (is_face(s, t)) star_gens.push_back(t);
    star.cells = face_closure(star_gens);
    for (const Simplex& t : star.cells)
        if (simplex_intersect(t, s).empty()) link.cells.insert(t);
    return {star, link};
}

Subcomplex skeleton(const Complex& k, int d) {
    Subcomplex sc;
    sc.parent = &k;
    for (const Simplex& s : k.cells)
        if (sdim(s) <= d) sc.cells.insert(s);
    return sc;
}

bool point_in_cell(const Complex& k, const Simplex& s, const Vec& x) {
    auto lam = barycentric_coords(k.cell_points(s), x);
    if (!lam) return false;
    for (const Rat& l : *lam)
        if (l < 0) return false;
    return true;
}

std::optional<Simplex> carrier_of_point(const Complex& k, const Vec& x) {
    std::optional<Simplex> best;
    for (const Simplex& s : k.cells) {
        if (best && best->size() <= s.size()) continue;
        if (point_in_cell(k, s, x)) best = s;
    }
    return best;
}

bool manifold_check_small(const Complex& k) {
    int d = k.dim();
    if (d > 3 || d < 1) return true;
    // pseudomanifold condition: every (d-1)-cell in at most two d-cells
    for (const Simplex& s : k.cells) {
        if (sdim(s) != d - 1) continue;
        int count = 0;
        for (const Simplex& t : k.cells)
            if (sdim(t) == d && is_face(s, t)) ++count;
        if (count > 2) return false;
    }
    // vertex links: connected, Euler characteristic of sphere or ball
    for (size_t v = 0; v < k.verts.size(); ++v) {
        Simplex vs{static_cast<int>(v)};
        if (!k.contains(vs)) continue;
        auto [star, link] = star_link(k, vs);
        if (link.cells.empty()) continue;
        long chi = 0;
        for (const Simplex& s : link.cells) chi += (sdim(s) % 2 == 0) ? 1 : -1;
        long sphere_chi = (d % 2 == 0) ? 2 : 0;  // chi of S^{d-1}
        if (chi != sphere_chi && chi != 1) return false;  // 1 = ball (boundary vertex)
    }
    return true;
}

}  // namespace sunco
