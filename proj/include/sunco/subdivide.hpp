#pragma once

#include "sunco/maps.hpp"

#include <map>

namespace sunco {

// Interior derivation points, one per cell of dimension >= 1 (vertices always
// derive to themselves).
using Schedule = std::map<Simplex, Vec>;

// A derived subdivision together with its carrier bookkeeping. Result vertices
// are the derivation points; result cells are the chains of original cells,
// so the carrier of a result cell is the top of its chain.
struct DerivedComplex {
    Complex original;
    Complex result;
    std::vector<Simplex> vertex_carrier;  // per result vertex: smallest original cell containing it

    Simplex carrier(const Simplex& result_cell) const {
        Simplex best;
        for (int v : result_cell) {
            const Simplex& c = vertex_carrier[static_cast<size_t>(v)];
            if (c.size() > best.size()) best = c;
        }
        return best;
    }

    // Subdivision of a subcomplex: result cells carried inside L.
    SimplexSet induced(const SimplexSet& L) const {
        SimplexSet out;
        for (const Simplex& s : result.cells)
            if (L.count(carrier(s))) out.insert(s);
        return out;
    }
};

DerivedComplex barycentric(const Complex& k);
DerivedComplex derived(const Complex& k, const Schedule& sched);

// barycentric twice, carriers composed down to k.
DerivedComplex second_derived(const Complex& k);

// Sublemma-4.2-style second derived: first derived is barycentric; the second
// round derives each cell a_j * B at the zero of the join-linear height
// function valued -1 on the boundary and (height at the barycenter) + shift at
// the barycenter. Lower heights push derivation points toward the barycenter,
// which is what makes neighborhoods of low material lag behind shadows.
struct Lagging {
    DerivedComplex dc;  // original = the input complex, result = K''
    Rat shift;
    std::map<Simplex, Rat> center_height;  // per original cell: height at its barycenter
};

Lagging lagging_second_derived(const Complex& k, const std::vector<Rat>& vertex_height,
                               const Rat& shift);

// Simplicial neighborhood of the induced subdivision of L inside the derived
// complex: cells meeting |L| (equivalently, with a vertex carried in L) plus
// faces. Throws NotSubcomplex if L is not a subcomplex of the original.
SimplexSet derived_neighborhood(const DerivedComplex& dc, const SimplexSet& L);

enum class PointClass { InL, InNMinusL, InIntNMinusL, Outside };

// Membership of a point in the derived neighborhood, decided by the recursive
// radial criterion (carrier, radial boundary point, height function sign).
PointClass classify_point(const Vec& x, const SimplexSet& L, const Lagging& lag);

// Transport host data (F values, components, singular set, boundary copies)
// onto a derived subdivision of the host complex.
Host derive_host(const Host& h, const DerivedComplex& dc);

}  // namespace sunco
