#pragma once

#include "sunco/collapse.hpp"

namespace sunco {

// One elementary retraction: fold the coface through its free face onto the
// rest of its boundary. The fold is the PL min-fold in barycentric
// coordinates (subtract the smallest free-face coordinate from all of them
// and hand it to the opposite vertex), which fixes the walls and empties the
// open coface and open free face.
struct Stage {
    Simplex coface;
    Simplex free_face;
    int opposite;  // the vertex of coface minus free_face
    Rat t0, t1;    // time subinterval of [0,1]
};

// The homotopy h_t assembled from a collapse sequence: identity at 0, each
// stage interpolated linearly over its subinterval, image inside X x 0 at 1.
struct PLDeformation {
    std::vector<Stage> stages;
};

PLDeformation collapse_to_deformation(const Host& h, const CollapseSequence& seq);

// h_t(x): run every finished stage, interpolate the active one.
Vec deformation_eval(const Host& h, const PLDeformation& d, const Vec& x, const Rat& t);

// P(F(z)) for any point z of the host, by carrier location.
Vec host_pf_at(const Host& h, const Vec& z);

// The track of one starting point through the whole deformation, with exact
// PF values at every breakpoint. Within a stage the point travels a straight
// segment inside one cell, so PF is linear between breakpoints.
struct TrackedPath {
    std::vector<Rat> times;
    std::vector<Vec> positions;  // host coordinates
    std::vector<Vec> pf;         // P(F(position))
};

TrackedPath track_point(const Host& h, const PLDeformation& d, const Vec& start);

// H : X x [0,1] -> X x I per the reparametrization recipe: the first half
// follows the top copy through the collapse, the second half is the base
// projection of the same track, traversed back, included into X x 0.
struct Reparametrization {
    const Host* host;
    const PLDeformation* def;
};

Vec h_map(const Host& h, const PLDeformation& d, const Vec& x_base, const Rat& t);

// The delivered level-preserving map. Evaluated literally, the construction
// ends at (f_1 x, 0) for t = 0 and (f_0 x, 1) for t = 1; the delivered map is
// time-reversed so it runs from f_0 to f_1, and the flag records that.
struct LevelMap {
    Host host;
    PLDeformation def;
    bool time_reversed = true;
    Partition part;       // components of X (labels per base X vertex)
    Complex base_x;       // X itself
    std::vector<Vec> f0_q, f1_q;  // endpoint maps on X vertices (Q coordinates)
};

LevelMap level_shift(const Host& h, const PLDeformation& d, const Complex& base_x,
                     const Partition& part);

// Q-coordinate of the delivered map at (x, t); the I-coordinate is t itself.
Vec phi_q(const LevelMap& lm, const Vec& x_base, const Rat& t);

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> lines;
    std::string witness;  // diagnostic for the first failure
};

struct VerifyOptions {
    Mode mode = Mode::link();
    bool doodle = false;
    int doodle_l = 3;
    std::optional<Rat> eps;
    int samples = 100;
    uint64_t seed = 1;
};

VerifyReport verify_level_map(const LevelMap& lm, const VerifyOptions& opt);

// ---------------------------------------------------------------------------

enum class PipelineMode { LinkMode, DoodleMode, EpsMode };

struct RunConfig {
    PipelineMode mode = PipelineMode::LinkMode;
    int doodle_l = 3;
    Rat eps = Rat(1, 4);
    uint64_t seed = 1;
    Rat magnitude = Rat(1);
    Rat shift = Rat(1, 100);  // the lagging height offset
    int retry_budget = 32;
    int verify_samples = 100;
};

struct PipelineResult {
    Concordance conc;    // after perturbation
    GPReport gp;
    Host sunny_host;
    CollapseSequence sunny_seq;
    StabilizeResult stab;
    LevelMap level_map;
    VerifyReport report;
};

// Full chain: general position, sunny collapse, stabilization, deformation,
// reparametrization, level shift, verification.
PipelineResult pipeline(const Concordance& input, const RunConfig& cfg);

// Cross-component image disjointness of the concordance itself (the link map
// precondition), and the doodle variant.
LinkWitness concordance_link_check(const Concordance& c, int l = 2);

}  // namespace sunco
