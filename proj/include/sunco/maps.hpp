#pragma once

#include "sunco/product.hpp"

#include <optional>

namespace sunco {

// A simplicial map given by its vertex assignment. Degeneracies are allowed:
// the image vertex set of a cell may be smaller, it just has to span a cell
// of the target.
struct SimplicialMap {
    const Complex* source = nullptr;
    const Complex* target = nullptr;
    std::vector<int> vmap;

    Simplex image_cell(const Simplex& s) const {
        Simplex out;
        for (int v : s) out.push_back(vmap[static_cast<size_t>(v)]);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

SimplicialMap make_simplicial_map(const Complex& source, const Complex& target,
                                  std::vector<int> vmap);  // validates

// Barycentric-linear evaluation. Throws PointOutsideComplex.
Vec evaluate(const SimplicialMap& f, const Vec& x);

// Singular subcomplex of a vertex map: the smallest subcomplex containing the
// closure of the points with non-singleton fibers. Target-agnostic: only the
// vertex assignment matters. Degenerate cells are singular outright; two
// distinct cells mapping nondegenerately onto the same image cell are singular
// in their entirety (the induced affine correspondence has a nowhere-dense
// fixed set once the cells differ).
SimplexSet singular_set_cells(const Complex& source, const std::vector<int>& vmap);

Subcomplex singular_set(const SimplicialMap& g);

struct LinkWitness {
    bool ok = true;
    std::vector<Vec> points;    // common image point evidence (one per piece)
    std::vector<Simplex> cells; // the offending source cells
};

// f X_i disjoint from f X_j for i != j, decided by exact hull intersection on
// every cross-component cell pair (bounding boxes prefilter).
LinkWitness is_link_map(const SimplicialMap& f, const Partition& part);

// No l distinct components share an image point.
LinkWitness is_doodle(const SimplicialMap& f, const Partition& part, int l = 3);

// ---------------------------------------------------------------------------
// Concordance bundle: F : X x I -> Q x I, simplicial from a materialized
// staircase tower over X into a (virtual) staircase tower over Q.
struct Concordance {
    ProductComplex xp;        // X x I, the collapse host ambient
    Complex q;                // Q
    std::vector<Rat> q_levels;
    std::vector<int> fmap;    // X-tower vertex -> Q-tower vertex id
    Partition part;           // components of X
    bool q_manifold = true;

    TowerRef qtower() const { return TowerRef{&q, q_levels}; }

    int pf_vertex(int v) const;   // Q-vertex of P(F(v))
    Vec pf_coords(int v) const;   // coordinates of P(F(v))
    Rat height(int v) const;      // Pi(F(v))
    int comp_of_vertex(int v) const;
};

// Validates simpliciality of F against the virtual tower and the level
// boundary conditions F(X x i) in Q x i.
void validate_concordance(const Concordance& c);

struct GPReport {
    SimplexSet singular;            // cells of S(P o F) in the X tower
    bool codim_ok = true;
    bool nondegenerate_ok = true;
    std::vector<Simplex> offending; // cells violating either condition
    bool ok() const { return codim_ok && nondegenerate_ok; }
};

GPReport check_general_position(const Concordance& c);

// Las Vegas repair: remap images of offending vertices to tower vertices in
// the star of the original image (Q-coordinate displacement bounded by
// `magnitude`, level untouched), verify, retry. Deterministic in `seed`.
Concordance perturb_general_position(const Concordance& c, const Rat& magnitude,
                                     uint64_t seed, int retry_budget = 32);

// ---------------------------------------------------------------------------
// Host: the working form of F for the collapse engine. The complex refines
// |X x I|; F is linear on every cell; per-vertex image data is exact. The
// final coordinate of a host vertex is its level, the prefix is p(v).
struct Host {
    Complex cx;
    std::vector<Vec> pf;       // P(F(v)) per vertex
    std::vector<Rat> height;   // Pi(F(v)) per vertex
    std::vector<int> comp;     // component label per vertex
    SimplexSet sing;           // singular subcomplex, carried through refinements
    SimplexSet bottom, top;    // X x 0 and X x 1

    Rat level_of(int v) const { return cx.coords(v).back(); }
    Vec base_pos(int v) const {
        Vec c = cx.coords(v);
        c.pop_back();
        return c;
    }
    int dim_x() const { return cx.dim() - 1; }
};

Host make_host(const Concordance& c);

}  // namespace sunco
