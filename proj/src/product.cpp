#include "sunco/product.hpp"

#include <algorithm>

namespace sunco {

Partition make_partition(const Complex& base, std::vector<int> labels) {
    if (labels.size() != base.verts.size())
        throw Error(Err::ParseError, "partition label count mismatch");
    Partition p;
    p.labels = std::move(labels);
    for (int l : p.labels) {
        if (l < 1) throw Error(Err::ParseError, "partition labels must be >= 1");
        p.k = std::max(p.k, l);
    }
    for (const Simplex& s : base.cells)
        for (size_t i = 1; i < s.size(); ++i)
            if (p.labels[static_cast<size_t>(s[i])] != p.labels[static_cast<size_t>(s[0])])
                throw Error(Err::ParseError, "partition splits a simplex");
    return p;
}

Partition trivial_partition(const Complex& base) {
    Partition p;
    p.labels.assign(base.verts.size(), 1);
    p.k = base.verts.empty() ? 0 : 1;
    return p;
}

ProductComplex staircase_tower(const Complex& k, const std::vector<Rat>& levels) {
    if (k.cells.empty()) throw Error(Err::ParseError, "staircase product of empty complex");
    if (levels.size() < 2 || levels.front() != 0 || levels.back() != 1)
        throw Error(Err::ParseError, "levels must run from 0 to 1");
    for (size_t i = 1; i < levels.size(); ++i)
        if (!(levels[i - 1] < levels[i]))
            throw Error(Err::ParseError, "levels must be strictly increasing");

    ProductComplex pc;
    pc.base = k;
    pc.levels = levels;
    int nb = static_cast<int>(k.verts.size());
    int nl = static_cast<int>(levels.size());

    pc.total.ambient_dim = k.ambient_dim + 1;
    pc.total.verts.reserve(static_cast<size_t>(nb) * nl);
    for (int j = 0; j < nl; ++j) {
        for (int v = 0; v < nb; ++v) {
            Vec c = k.coords(v);
            c.push_back(levels[static_cast<size_t>(j)]);
            pc.total.verts.push_back(std::move(c));
            pc.vbase.push_back(v);
            pc.vlevel.push_back(j);
        }
    }

    std::vector<Simplex> gens;
    for (const Simplex& cell : maximal_cells(k.cells)) {
        int d = sdim(cell);
        for (int j = 0; j + 1 < nl; ++j) {
            // monotone chains through the slab: vertices 0..i at the bottom,
            // i..d at the top
            for (int i = 0; i <= d; ++i) {
                Simplex s;
                for (int a = 0; a <= i; ++a) s.push_back(pc.vid(cell[static_cast<size_t>(a)], j));
                for (int a = i; a <= d; ++a) s.push_back(pc.vid(cell[static_cast<size_t>(a)], j + 1));
                gens.push_back(make_simplex(s));
            }
        }
    }
    pc.total.cells = face_closure(gens);

    for (const Simplex& cell : k.cells) {
        Simplex b, t;
        for (int v : cell) {
            b.push_back(pc.vid(v, 0));
            t.push_back(pc.vid(v, nl - 1));
        }
        pc.bottom.insert(make_simplex(b));
        pc.top.insert(make_simplex(t));
    }
    return pc;
}

ProductComplex staircase_product(const Complex& k) {
    return staircase_tower(k, {Rat(0), Rat(1)});
}

Vec TowerRef::coords(int v) const {
    Vec c = base->coords(vbase(v));
    c.push_back(levels[static_cast<size_t>(vlevel(v))]);
    return c;
}

bool TowerRef::has_cell(const Simplex& s) const {
    if (s.empty()) return false;
    int lo = vlevel(s[0]), hi = lo;
    for (int v : s) {
        lo = std::min(lo, vlevel(v));
        hi = std::max(hi, vlevel(v));
    }
    if (hi - lo > 1) return false;
    Simplex blo, bhi, all;
    for (int v : s) {
        int b = vbase(v);
        all.push_back(b);
        (vlevel(v) == lo ? blo : bhi).push_back(b);
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    if (!base->contains(all)) return false;
    if (hi == lo) return true;
    // staircase condition: bottom part must not pass the top part in index order
    int maxlo = *std::max_element(blo.begin(), blo.end());
    int minhi = *std::min_element(bhi.begin(), bhi.end());
    return maxlo <= minhi;
}

std::vector<int> TowerRef::base_neighbors(int base_v) const {
    std::vector<int> out;
    for (const Simplex& s : base->cells) {
        if (s.size() != 2) continue;
        if (s[0] == base_v) out.push_back(s[1]);
        else if (s[1] == base_v) out.push_back(s[0]);
    }
    return out;
}

}  // namespace sunco
