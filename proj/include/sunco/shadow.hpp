#pragma once

#include "sunco/maps.hpp"

namespace sunco {

// Shadow flavor. Plain quantifies over all source points; Link only counts
// shadows cast across components; Eps additionally requires the witness pair
// to be eps-separated in the base (max-metric after projecting by p), which is
// a conservative strengthening of the eps-shadow: it admits more shadow pairs,
// hence certifies a stronger sunny condition.
struct Mode {
    enum Kind { Plain, Link, Eps } kind = Link;
    Rat eps;

    static Mode plain() { return {Plain, Rat(0)}; }
    static Mode link() { return {Link, Rat(0)}; }
    static Mode eps_mode(const Rat& e) { return {Eps, e}; }

    std::string name() const {
        switch (kind) {
            case Plain: return "plain";
            case Link: return "link";
            case Eps: return "eps";
        }
        return "?";
    }
};

// One decided instance of "A overshadows B": there are a in A, b in B with
// P F(a) = P F(b) and Pi F(a) > Pi F(b), plus the mode's side condition.
// Decided by maximizing the height gap over the fiber-product polytope.
struct OvershadowFact {
    Simplex a, b;
    Mode mode;
    bool interior_b = false;  // witness b constrained to the open cell
    bool verdict = false;
    std::optional<std::pair<Vec, Vec>> witness;  // host-coordinate points
    Rat max_gap;  // best height gap found (only meaningful when feasible)
};

// Closed-cell version: witness anywhere in B.
OvershadowFact overshadows(const Host& h, const Simplex& a, const Simplex& b, const Mode& mode);

// Witness constrained to the interior of B (what the sunny conditions need:
// the removed material is exactly the open cells).
OvershadowFact overshadows_interior(const Host& h, const Simplex& a, const Simplex& b,
                                    const Mode& mode);

// Certified verdict for one simple collapse V \searrow W.
struct SunnyCertificate {
    Mode mode;
    bool stable = false;
    bool verdict = false;
    std::vector<OvershadowFact> checked;
    std::optional<OvershadowFact> violation;
};

// verdict true iff no cell of V (mode-)overshadows the interior of any cell
// whose interior lies in V minus W (simple) or V minus Int W (stable). The
// sweep is restricted to cells carried by the singular subcomplex: witnesses
// of any overshadowing are coincidence points of P o F, so cells off the
// singular set can neither cast nor receive shadows.
SunnyCertificate certify_step(const Host& h, const SimplexSet& V, const SimplexSet& W,
                              const Mode& mode, bool stable);

// Int |W| inside the host, as a cell predicate: cells of W all of whose
// cofaces stay in W.
bool cell_in_interior(const Host& h, const SimplexSet& W, const Simplex& s);

struct OrderResult {
    bool ok = true;
    std::vector<Simplex> order;
    std::vector<Simplex> cycle;  // a directed overshadow cycle when !ok
};

// Stable topological order of the overshadow digraph: overshadowing cells
// come first. Input order is preserved among incomparable cells.
OrderResult overshadow_order(const Host& h, const std::vector<Simplex>& cells, const Mode& mode);

}  // namespace sunco
