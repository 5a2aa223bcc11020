#pragma once

#include "sunco/shadow.hpp"
#include "sunco/subdivide.hpp"

namespace sunco {

// One elementary collapse: remove `coface` together with its free face.
struct ElementaryStep {
    Simplex coface;
    Simplex free_face;
};

// A contiguous run of elementary steps certified as one simple collapse.
struct SimpleGroup {
    size_t begin = 0, end = 0;  // step index range
    std::string kind;           // cylindrical | blister | base | nbhd | final
    SunnyCertificate cert;
};

struct CollapseSequence {
    std::vector<ElementaryStep> steps;
    std::vector<SimpleGroup> groups;
    SimplexSet from, to;
    // alive subcomplex at every group boundary: filtration[0] = from,
    // filtration[groups.size()] = to
    std::vector<SimplexSet> filtration;
};

struct ReplayResult {
    bool ok = true;
    size_t bad_step = 0;
    std::string reason;
};

// Replay every elementary step against `from` and require the final state to
// equal `to`. Failures carry the first illegal step.
ReplayResult verify_collapse(const Complex& ambient, const CollapseSequence& seq,
                             const SimplexSet& from, const SimplexSet& to);

// Cylindrical collapse of a pristine staircase tower onto base x 0 union
// Y x I, peeling every prism over a maximal base cell outside Y slab by slab
// from the top. Y must contain every non-maximal base cell (the classical
// skeleton choice satisfies this).
CollapseSequence cylindrical_collapse(const ProductComplex& xp, const SimplexSet& y_base);

// ---------------------------------------------------------------------------
// Blisters (2-dimensional hosts: dim X = 1, singular cells are vertices).

struct Blister {
    int a = -1;                    // the singular vertex
    bool at_top = false;           // vertex on X x 1 (a_up coincides with a)
    int a_up = -1, a_dn = -1, a_to = -1;
    SimplexSet J, K, L;            // blister, bad face, good face (subdivided)
    std::vector<ElementaryStep> steps;  // J onto L
};

struct BlisterSet {
    Host host;  // locally resubdivided host containing every blister
    std::vector<Blister> blisters;
    std::map<int, int> phi;  // a -> a_to (good-face correspondence data)
};

// Builds blisters over every maximal singular cell not inside X x 0.
// Requires a 2-dimensional host whose singular cells are vertices with
// vertical neighbor edges (staircase towers provide these). The scale of the
// three blister points is halved until the smallness invariants verify.
BlisterSet build_blisters(const Host& h);

// ---------------------------------------------------------------------------

struct SunnyOptions {
    Mode mode = Mode::link();
    bool require_gp = true;
};

// Lemma-3.1 pipeline: cylindrical collapse leaving blisters, blister
// collapses in overshadow order, then the recursion on the punctured walls.
// Returns the certified sequence on (a possibly resubdivided copy of) the
// host; `host_out` receives that host.
CollapseSequence sunny_collapse(const Host& h, const SunnyOptions& opt, Host& host_out);

// Sublemma-4.3 transport: turn a collapse in dc.original into a collapse of
// derived neighborhoods in dc.result. Steps are generated per original
// elementary step, clearing N(V) onto N(V minus the removed pair).
CollapseSequence neighborhood_collapse(const DerivedComplex& dc, const CollapseSequence& seq,
                                       const SimplexSet& from);

struct StabilizeResult {
    Host host;          // the lagging second derived host
    Lagging lagging;
    CollapseSequence seq;
};

// Lemma-4.1 / 6.1 pipeline: lagging second derived subdivision, derived
// neighborhoods of the input filtration, neighborhood collapses between them,
// and a final collapse of the regular neighborhood of X x 0. Every group is
// certified stable in the given mode; failure throws
// StabilizationCertificateFailed.
StabilizeResult stabilize(const Host& h, const CollapseSequence& seq, const Mode& mode,
                          const Rat& shift);

}  // namespace sunco
