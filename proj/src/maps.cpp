#include "sunco/maps.hpp"

#include "sunco/geom_kernel.hpp"
#include "sunco/linalg.hpp"
#include "sunco/rng.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace sunco {

SimplicialMap make_simplicial_map(const Complex& source, const Complex& target,
                                  std::vector<int> vmap) {
    if (vmap.size() != source.verts.size())
        throw Error(Err::ParseError, "vertex map length mismatch");
    for (int t : vmap)
        if (t < 0 || t >= static_cast<int>(target.verts.size()))
            throw Error(Err::ParseError, "vertex map image out of range");
    SimplicialMap f{&source, &target, std::move(vmap)};
    for (const Simplex& s : source.cells)
        if (!target.contains(f.image_cell(s)))
            throw Error(Err::ParseError, "map is not simplicial on a source cell");
    return f;
}

Vec evaluate(const SimplicialMap& f, const Vec& x) {
    auto car = carrier_of_point(*f.source, x);
    if (!car) throw Error(Err::PointOutsideComplex, "evaluate");
    auto lam = barycentric_coords(f.source->cell_points(*car), x);
    Vec out(static_cast<size_t>(f.target->ambient_dim), Rat(0));
    for (size_t i = 0; i < car->size(); ++i) {
        const Vec& tv = f.target->coords(f.vmap[static_cast<size_t>((*car)[i])]);
        for (size_t c = 0; c < out.size(); ++c) out[c] += (*lam)[i] * tv[c];
    }
    return out;
}

SimplexSet singular_set_cells(const Complex& source, const std::vector<int>& vmap) {
    std::vector<Simplex> gens;
    std::map<Simplex, std::vector<Simplex>> bucket;  // image cell -> sources mapping onto it
    for (const Simplex& s : source.cells) {
        Simplex img;
        for (int v : s) img.push_back(vmap[static_cast<size_t>(v)]);
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        if (img.size() < s.size()) gens.push_back(s);  // degenerate
        else bucket[img].push_back(s);
    }
    for (auto& [img, members] : bucket) {
        if (members.size() >= 2)
            for (Simplex& s : members) gens.push_back(std::move(s));
    }
    return face_closure(gens);
}

Subcomplex singular_set(const SimplicialMap& g) {
    Subcomplex sc;
    sc.parent = g.source;
    sc.cells = singular_set_cells(*g.source, g.vmap);
    return sc;
}

// bounding box of an image cell
static std::pair<Vec, Vec> bbox(const std::vector<Vec>& pts) {
    Vec lo = pts[0], hi = pts[0];
    for (const Vec& p : pts)
        for (size_t c = 0; c < p.size(); ++c) {
            if (p[c] < lo[c]) lo[c] = p[c];
            if (p[c] > hi[c]) hi[c] = p[c];
        }
    return {lo, hi};
}

static bool bbox_meet(const std::pair<Vec, Vec>& a, const std::pair<Vec, Vec>& b) {
    for (size_t c = 0; c < a.first.size(); ++c)
        if (a.second[c] < b.first[c] || b.second[c] < a.first[c]) return false;
    return true;
}

namespace {
struct ImageCellList {
    std::vector<Simplex> cells;
    std::vector<std::vector<Vec>> pts;
    std::vector<std::pair<Vec, Vec>> boxes;
};
}  // namespace

static ImageCellList images_by_component(const SimplicialMap& f, const Partition& part,
                                         int want_label) {
    ImageCellList out;
    for (const Simplex& s : maximal_cells(f.source->cells)) {
        if (part.labels[static_cast<size_t>(s[0])] != want_label) continue;
        std::vector<Vec> pts;
        for (int v : s) pts.push_back(f.target->coords(f.vmap[static_cast<size_t>(v)]));
        out.boxes.push_back(bbox(pts));
        out.pts.push_back(std::move(pts));
        out.cells.push_back(s);
    }
    return out;
}

LinkWitness is_link_map(const SimplicialMap& f, const Partition& part) {
    LinkWitness w;
    std::vector<ImageCellList> per(static_cast<size_t>(part.k));
    for (int l = 1; l <= part.k; ++l) per[static_cast<size_t>(l - 1)] = images_by_component(f, part, l);
    for (int i = 0; i < part.k; ++i) {
        for (int j = i + 1; j < part.k; ++j) {
            const auto& A = per[static_cast<size_t>(i)];
            const auto& B = per[static_cast<size_t>(j)];
            for (size_t a = 0; a < A.cells.size(); ++a) {
                for (size_t b = 0; b < B.cells.size(); ++b) {
                    if (!bbox_meet(A.boxes[a], B.boxes[b])) continue;
                    if (auto hit = hull_common_point(A.pts[a], B.pts[b])) {
                        w.ok = false;
                        w.points = {hit->first, hit->second};
                        w.cells = {A.cells[a], B.cells[b]};
                        return w;
                    }
                }
            }
        }
    }
    return w;
}

LinkWitness is_doodle(const SimplicialMap& f, const Partition& part, int l) {
    LinkWitness w;
    if (l < 2) throw Error(Err::ParseError, "doodle arity must be >= 2");
    std::vector<ImageCellList> per(static_cast<size_t>(part.k));
    for (int c = 1; c <= part.k; ++c) per[static_cast<size_t>(c - 1)] = images_by_component(f, part, c);
    // iterate l-subsets of components, then tuples of their maximal cells
    std::vector<int> comp(static_cast<size_t>(l));
    for (int i = 0; i < l; ++i) comp[static_cast<size_t>(i)] = i;
    if (l > part.k) return w;  // vacuous
    while (true) {
        std::vector<size_t> pick(static_cast<size_t>(l), 0);
        bool done_tuple = false;
        for (int i = 0; i < l; ++i)
            if (per[static_cast<size_t>(comp[static_cast<size_t>(i)])].cells.empty()) done_tuple = true;
        while (!done_tuple) {
            std::vector<std::vector<Vec>> sets;
            bool boxes_ok = true;
            for (int i = 0; i < l && boxes_ok; ++i)
                for (int j = i + 1; j < l && boxes_ok; ++j)
                    boxes_ok = bbox_meet(per[static_cast<size_t>(comp[static_cast<size_t>(i)])].boxes[pick[static_cast<size_t>(i)]],
                                         per[static_cast<size_t>(comp[static_cast<size_t>(j)])].boxes[pick[static_cast<size_t>(j)]]);
            if (boxes_ok) {
                for (int i = 0; i < l; ++i)
                    sets.push_back(per[static_cast<size_t>(comp[static_cast<size_t>(i)])].pts[pick[static_cast<size_t>(i)]]);
                if (auto hit = hulls_common_point(sets)) {
                    w.ok = false;
                    w.points = *hit;
                    for (int i = 0; i < l; ++i)
                        w.cells.push_back(per[static_cast<size_t>(comp[static_cast<size_t>(i)])].cells[pick[static_cast<size_t>(i)]]);
                    return w;
                }
            }
            // next tuple
            int i = l - 1;
            while (i >= 0) {
                if (++pick[static_cast<size_t>(i)] < per[static_cast<size_t>(comp[static_cast<size_t>(i)])].cells.size()) break;
                pick[static_cast<size_t>(i)] = 0;
                --i;
            }
            if (i < 0) done_tuple = true;
        }
        // next component subset
        int i = l - 1;
        while (i >= 0 && comp[static_cast<size_t>(i)] == part.k - l + i) --i;
        if (i < 0) break;
        ++comp[static_cast<size_t>(i)];
        for (int j = i + 1; j < l; ++j) comp[static_cast<size_t>(j)] = comp[static_cast<size_t>(j - 1)] + 1;
    }
    return w;
}

// ---------------------------------------------------------------------------

int Concordance::pf_vertex(int v) const {
    return qtower().vbase(fmap[static_cast<size_t>(v)]);
}

Vec Concordance::pf_coords(int v) const { return q.coords(pf_vertex(v)); }

Rat Concordance::height(int v) const {
    return q_levels[static_cast<size_t>(qtower().vlevel(fmap[static_cast<size_t>(v)]))];
}

int Concordance::comp_of_vertex(int v) const {
    return part.labels[static_cast<size_t>(xp.vbase[static_cast<size_t>(v)])];
}

void validate_concordance(const Concordance& c) {
    if (c.fmap.size() != c.xp.total.verts.size())
        throw Error(Err::ParseError, "concordance vertex map length mismatch");
    TowerRef qt = c.qtower();
    for (int t : c.fmap)
        if (t < 0 || t >= qt.nverts())
            throw Error(Err::ParseError, "concordance image vertex out of range");
    for (const Simplex& s : c.xp.total.cells) {
        Simplex img;
        for (int v : s) img.push_back(c.fmap[static_cast<size_t>(v)]);
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        if (!qt.has_cell(img)) {
            std::ostringstream os;
            os << "F not simplicial on a cell of the X tower (cell of dim " << sdim(s) << ")";
            throw Error(Err::ParseError, os.str());
        }
    }
    // level boundary conditions
    int last = static_cast<int>(c.xp.levels.size()) - 1;
    int qlast = static_cast<int>(c.q_levels.size()) - 1;
    for (size_t v = 0; v < c.fmap.size(); ++v) {
        int lv = c.xp.vlevel[v];
        int qlv = qt.vlevel(c.fmap[v]);
        if (lv == 0 && qlv != 0)
            throw Error(Err::ParseError, "F(X x 0) not inside Q x 0");
        if (lv == last && qlv != qlast)
            throw Error(Err::ParseError, "F(X x 1) not inside Q x 1");
    }
}

GPReport check_general_position(const Concordance& c) {
    GPReport rep;
    std::vector<int> pfmap(c.fmap.size());
    for (size_t v = 0; v < c.fmap.size(); ++v) pfmap[v] = c.pf_vertex(static_cast<int>(v));
    rep.singular = singular_set_cells(c.xp.total, pfmap);

    int m = c.q.dim();
    int n = c.xp.base.dim();
    int k = m - n - 1;
    for (const Simplex& s : rep.singular) {
        int d = sdim(s);
        if (k > 0) {
            bool found = false;
            for (const Simplex& t : c.xp.total.cells) {
                if (sdim(t) == d + k && is_face(s, t)) { found = true; break; }
            }
            if (!found) {
                rep.codim_ok = false;
                rep.offending.push_back(s);
            }
        }
        // p restricted to S must not collapse dimensions
        Simplex pimg;
        for (int v : s) pimg.push_back(c.xp.vbase[static_cast<size_t>(v)]);
        std::sort(pimg.begin(), pimg.end());
        pimg.erase(std::unique(pimg.begin(), pimg.end()), pimg.end());
        if (pimg.size() < s.size()) {
            rep.nondegenerate_ok = false;
            rep.offending.push_back(s);
        }
    }
    return rep;
}

Concordance perturb_general_position(const Concordance& c, const Rat& magnitude,
                                     uint64_t seed, int retry_budget) {
    if (c.q.dim() - c.xp.base.dim() < 2)
        throw Error(Err::CodimensionTooLow, "perturbation requires codimension >= 2");
    GPReport rep = check_general_position(c);
    if (rep.ok()) return c;

    TowerRef qt = c.qtower();
    // coordinate -> Q vertex lookup, for parallel translations
    std::map<Vec, int> coord_ix;
    for (size_t v = 0; v < c.q.verts.size(); ++v) coord_ix[c.q.coords(static_cast<int>(v))] = static_cast<int>(v);

    Rng rng(seed);
    GPReport last = rep;
    for (int attempt = 0; attempt < retry_budget; ++attempt) {
        // vertices implicated in the failure
        std::set<int> offenders;
        for (const Simplex& s : last.singular)
            for (int v : s) offenders.insert(v);
        for (const Simplex& s : last.offending)
            for (int v : s) offenders.insert(v);
        if (offenders.empty()) break;

        Concordance cand = c;
        bool parallel = (attempt % 2 == 0);
        bool feasible_move = false;
        if (parallel) {
            // one random grid displacement per component, applied to all of its
            // offending vertices; keeps walk shapes intact
            std::map<int, Vec> delta;
            for (int v : offenders) {
                int comp = c.comp_of_vertex(v);
                if (delta.count(comp)) continue;
                int qv = c.pf_vertex(v);
                std::vector<int> nb = qt.base_neighbors(qv);
                std::vector<Vec> dirs;
                for (int u : nb) {
                    Vec d = vec_sub(c.q.coords(u), c.q.coords(qv));
                    if (dist_max(c.q.coords(u), c.q.coords(qv)) <= magnitude) dirs.push_back(d);
                }
                if (dirs.empty()) continue;
                delta[comp] = dirs[static_cast<size_t>(rng.below(dirs.size()))];
            }
            for (int v : offenders) {
                int comp = c.comp_of_vertex(v);
                auto it = delta.find(comp);
                if (it == delta.end()) continue;
                int qv = c.pf_vertex(v);
                Vec target = vec_add(c.q.coords(qv), it->second);
                auto jt = coord_ix.find(target);
                if (jt == coord_ix.end()) continue;
                int lvl = qt.vlevel(c.fmap[static_cast<size_t>(v)]);
                cand.fmap[static_cast<size_t>(v)] = qt.vid(jt->second, lvl);
                feasible_move = true;
            }
        } else {
            for (int v : offenders) {
                int qv = c.pf_vertex(v);
                std::vector<int> opts;
                for (int u : qt.base_neighbors(qv))
                    if (dist_max(c.q.coords(u), c.q.coords(qv)) <= magnitude) opts.push_back(u);
                if (opts.empty()) continue;
                if (rng.coin()) continue;  // move only a random subset
                int u = opts[static_cast<size_t>(rng.below(opts.size()))];
                int lvl = qt.vlevel(c.fmap[static_cast<size_t>(v)]);
                cand.fmap[static_cast<size_t>(v)] = qt.vid(u, lvl);
                feasible_move = true;
            }
        }
        if (!feasible_move) continue;
        try {
            validate_concordance(cand);
        } catch (const Error&) {
            continue;  // broke simpliciality; retry
        }
        GPReport r2 = check_general_position(cand);
        if (r2.ok()) return cand;
        last = r2;
    }
    throw Error(Err::PerturbationFailed, "retry budget exhausted; singular cells remain: " +
                                             std::to_string(last.singular.size()));
}

Host make_host(const Concordance& c) {
    Host h;
    h.cx = c.xp.total;
    size_t n = c.xp.total.verts.size();
    h.pf.resize(n);
    h.height.resize(n);
    h.comp.resize(n);
    for (size_t v = 0; v < n; ++v) {
        h.pf[v] = c.pf_coords(static_cast<int>(v));
        h.height[v] = c.height(static_cast<int>(v));
        h.comp[v] = c.comp_of_vertex(static_cast<int>(v));
    }
    std::vector<int> pfmap(n);
    for (size_t v = 0; v < n; ++v) pfmap[v] = c.pf_vertex(static_cast<int>(v));
    h.sing = singular_set_cells(c.xp.total, pfmap);
    h.bottom = c.xp.bottom;
    h.top = c.xp.top;
    return h;
}

}  // namespace sunco
