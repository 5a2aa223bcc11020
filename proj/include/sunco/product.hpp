#pragma once

#include "sunco/complex.hpp"

namespace sunco {

// Component labeling of a base complex. Valid when no edge joins two labels,
// so each labeled part is a union of connected components.
struct Partition {
    std::vector<int> labels;  // per base vertex, values in 1..k
    int k = 0;
};

Partition make_partition(const Complex& base, std::vector<int> labels);
Partition trivial_partition(const Complex& base);

// Staircase product triangulation of base x [0,1], generalized to a whole
// ladder of levels 0 = t_0 < ... < t_r = 1 (one staircase block per slab).
// Vertices are (v, t_j), indexed j * |V(base)| + v; the last coordinate of a
// total vertex is its level. Chains within each slab follow the global vertex
// index order of the base, which fixes the triangulation uniquely.
struct ProductComplex {
    Complex base;
    Complex total;
    std::vector<Rat> levels;
    std::vector<int> vbase;   // per total vertex: base vertex (the projection p)
    std::vector<int> vlevel;  // per total vertex: level index
    SimplexSet top, bottom;   // copies of base at levels 1 and 0

    int vid(int base_v, int level_idx) const {
        return level_idx * static_cast<int>(base.verts.size()) + base_v;
    }
    Rat level_of(int total_v) const { return levels[static_cast<size_t>(vlevel[static_cast<size_t>(total_v)])]; }
};

ProductComplex staircase_product(const Complex& k);
ProductComplex staircase_tower(const Complex& k, const std::vector<Rat>& levels);

// Lightweight tower view used for large targets: answers membership and
// star queries without materializing the total complex.
struct TowerRef {
    const Complex* base = nullptr;
    std::vector<Rat> levels;

    int nbase() const { return static_cast<int>(base->verts.size()); }
    int nverts() const { return nbase() * static_cast<int>(levels.size()); }
    int vid(int base_v, int level_idx) const { return level_idx * nbase() + base_v; }
    int vbase(int v) const { return v % nbase(); }
    int vlevel(int v) const { return v / nbase(); }
    Vec coords(int v) const;

    bool has_cell(const Simplex& s) const;
    // Base neighbors of q (vertices sharing an edge of the base with q).
    std::vector<int> base_neighbors(int base_v) const;
};

}  // namespace sunco
