#pragma once

#include "sunco/errors.hpp"
#include "sunco/rational.hpp"

#include <map>
#include <set>
#include <vector>

namespace sunco {

// A simplex is its sorted vertex-index set. Dimension = size - 1.
using Simplex = std::vector<int>;
using SimplexSet = std::set<Simplex>;

inline int sdim(const Simplex& s) { return static_cast<int>(s.size()) - 1; }

Simplex make_simplex(std::vector<int> verts);  // sorts, rejects repeats

bool is_face(const Simplex& a, const Simplex& b);  // a <= b (subset)
Simplex simplex_union(const Simplex& a, const Simplex& b);
Simplex simplex_intersect(const Simplex& a, const Simplex& b);
Simplex simplex_minus(const Simplex& a, const Simplex& b);

// All nonempty proper+improper faces of s.
std::vector<Simplex> all_faces(const Simplex& s);
// Codimension-1 faces.
std::vector<Simplex> facets_of(const Simplex& s);

// Close a set of simplexes under taking faces.
SimplexSet face_closure(const std::vector<Simplex>& generators);

// Maximal elements of a simplex set.
std::vector<Simplex> maximal_cells(const SimplexSet& cells);

// A finite geometric simplicial complex with exact rational vertex coordinates.
// `cells` is closed under faces; every cell is affinely independent. Pairwise
// interior disjointness is only verified when explicitly requested (the
// constructors in this project produce disjoint complexes by construction and
// the check costs a quadratic number of LPs).
struct Complex {
    int ambient_dim = 0;
    std::vector<Vec> verts;
    SimplexSet cells;

    int dim() const;
    bool contains(const Simplex& s) const { return cells.count(s) > 0; }
    const Vec& coords(int v) const { return verts[static_cast<size_t>(v)]; }
    std::vector<Vec> cell_points(const Simplex& s) const;
    Vec barycenter(const Simplex& s) const;

    // Incidence: codim-1 cofaces of every cell (built on demand, cached).
    const std::map<Simplex, std::vector<Simplex>>& coface_index() const;

    std::vector<Simplex> cofaces_of(const Simplex& s) const;  // all cells strictly containing s

    void invalidate_cache() { coface_cache_.clear(); }

private:
    mutable std::map<Simplex, std::vector<Simplex>> coface_cache_;
};

// A subcomplex is a face-closed subset of its parent's cells.
struct Subcomplex {
    const Complex* parent = nullptr;
    SimplexSet cells;

    bool contains(const Simplex& s) const { return cells.count(s) > 0; }
};

Subcomplex make_subcomplex(const Complex& parent, const std::vector<Simplex>& generators);

// Build the closure of the given facets over the given vertex coordinates.
// Throws DegenerateSimplex on affinely dependent (or repeated-vertex) facets.
Complex build_complex(const std::vector<Vec>& vertex_coords,
                      const std::vector<std::vector<int>>& facets);

// Exact pairwise interior-disjointness check (LP per candidate pair).
// Throws OverlappingInteriors naming the first bad pair.
void check_interior_disjoint(const Complex& k);

// (closed star, link) of s in k. Throws SimplexNotFound.
std::pair<Subcomplex, Subcomplex> star_link(const Complex& k, const Simplex& s);

// All cells of dimension <= d (d >= -1; d = -1 gives the empty subcomplex).
Subcomplex skeleton(const Complex& k, int d);

// Debug-mode combinatorial manifold test for ambient dimension <= 3 (checks
// vertex links are spheres/balls by Euler characteristic and pseudomanifold
// conditions). Returns true when the test passes or is not applicable.
bool manifold_check_small(const Complex& k);

// Exact point location: smallest cell whose realization contains x, nullopt if
// x is outside |k|.
std::optional<Simplex> carrier_of_point(const Complex& k, const Vec& x);

// Membership of x in the realization of one cell (barycentric, exact).
bool point_in_cell(const Complex& k, const Simplex& s, const Vec& x);

}  // namespace sunco
