#include "sunco/shadow.hpp"

#include "sunco/geom_kernel.hpp"
#include "sunco/lp.hpp"

#include <algorithm>
#include <map>

namespace sunco {

static int cell_comp(const Host& h, const Simplex& s) {
    return h.comp[static_cast<size_t>(s[0])];
}

// Build the fiber-product LP for the pair (A, B) and decide the overshadow
// predicate. When `interior_b` is set, the height gap and every beta must
// admit a common positive lower bound t, which characterizes a witness with
// b in the open cell; otherwise the gap itself is maximized.
// In eps mode the separation |p(a) - p(b)|_max >= eps is a disjunction of
// 2 * dim(X) linear constraints, solved one variant at a time.
static OvershadowFact decide(const Host& h, const Simplex& a, const Simplex& b,
                             const Mode& mode, bool interior_b) {
    OvershadowFact fact;
    fact.a = a;
    fact.b = b;
    fact.mode = mode;
    fact.interior_b = interior_b;
    fact.max_gap = 0;

    if (mode.kind == Mode::Link && cell_comp(h, a) == cell_comp(h, b)) return fact;

    int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
    int dq = static_cast<int>(h.pf[0].size());
    int dx = h.cx.ambient_dim - 1;

    int nvariants = (mode.kind == Mode::Eps) ? 2 * dx : 1;
    for (int var = 0; var < nvariants; ++var) {
        int nbase = na + nb + (interior_b ? 1 : 0);
        StandardLP lp(nbase);
        int ti = na + nb;  // index of t when interior_b

        for (int c = 0; c < dq; ++c) {
            std::vector<Rat> row(static_cast<size_t>(nbase), Rat(0));
            for (int i = 0; i < na; ++i) row[static_cast<size_t>(i)] = h.pf[static_cast<size_t>(a[static_cast<size_t>(i)])][static_cast<size_t>(c)];
            for (int j = 0; j < nb; ++j) row[static_cast<size_t>(na + j)] = -h.pf[static_cast<size_t>(b[static_cast<size_t>(j)])][static_cast<size_t>(c)];
            lp.add_eq(row, Rat(0));
        }
        {
            std::vector<Rat> row(static_cast<size_t>(nbase), Rat(0));
            for (int i = 0; i < na; ++i) row[static_cast<size_t>(i)] = 1;
            lp.add_eq(row, Rat(1));
        }
        {
            std::vector<Rat> row(static_cast<size_t>(nbase), Rat(0));
            for (int j = 0; j < nb; ++j) row[static_cast<size_t>(na + j)] = 1;
            lp.add_eq(row, Rat(1));
        }
        if (mode.kind == Mode::Eps) {
            int c = var / 2;
            int sign = (var % 2 == 0) ? 1 : -1;
            std::vector<Rat> row(static_cast<size_t>(lp.num_vars()), Rat(0));
            for (int i = 0; i < na; ++i)
                row[static_cast<size_t>(i)] = Rat(sign) * h.cx.coords(a[static_cast<size_t>(i)])[static_cast<size_t>(c)];
            for (int j = 0; j < nb; ++j)
                row[static_cast<size_t>(na + j)] = Rat(-sign) * h.cx.coords(b[static_cast<size_t>(j)])[static_cast<size_t>(c)];
            lp.add_ge(row, mode.eps);
        }

        std::vector<Rat> gap(static_cast<size_t>(lp.num_vars()), Rat(0));
        for (int i = 0; i < na; ++i) gap[static_cast<size_t>(i)] = h.height[static_cast<size_t>(a[static_cast<size_t>(i)])];
        for (int j = 0; j < nb; ++j) gap[static_cast<size_t>(na + j)] = -h.height[static_cast<size_t>(b[static_cast<size_t>(j)])];

        LPSolution sol;
        if (interior_b) {
            // gap >= t and beta_j >= t, maximize t
            {
                std::vector<Rat> row = gap;
                row.resize(static_cast<size_t>(lp.num_vars()), Rat(0));
                row[static_cast<size_t>(ti)] -= 1;
                lp.add_ge(row, Rat(0));
            }
            for (int j = 0; j < nb; ++j) {
                std::vector<Rat> row(static_cast<size_t>(lp.num_vars()), Rat(0));
                row[static_cast<size_t>(na + j)] = 1;
                row[static_cast<size_t>(ti)] = -1;
                lp.add_ge(row, Rat(0));
            }
            std::vector<Rat> obj(static_cast<size_t>(lp.num_vars()), Rat(0));
            obj[static_cast<size_t>(ti)] = 1;
            sol = lp.maximize(obj);
        } else {
            std::vector<Rat> obj = gap;
            obj.resize(static_cast<size_t>(lp.num_vars()), Rat(0));
            sol = lp.maximize(obj);
        }
        if (!sol.feasible || !(sol.value > 0)) continue;

        fact.verdict = true;
        Rat gv = 0;
        for (int i = 0; i < na; ++i) gv += sol.x[static_cast<size_t>(i)] * h.height[static_cast<size_t>(a[static_cast<size_t>(i)])];
        for (int j = 0; j < nb; ++j) gv -= sol.x[static_cast<size_t>(na + j)] * h.height[static_cast<size_t>(b[static_cast<size_t>(j)])];
        fact.max_gap = gv;
        std::vector<Vec> apts = h.cx.cell_points(a), bpts = h.cx.cell_points(b);
        std::vector<Rat> la(sol.x.begin(), sol.x.begin() + na);
        std::vector<Rat> lb(sol.x.begin() + na, sol.x.begin() + na + nb);
        fact.witness = std::make_pair(combine(apts, la), combine(bpts, lb));
        return fact;
    }
    return fact;
}

OvershadowFact overshadows(const Host& h, const Simplex& a, const Simplex& b, const Mode& mode) {
    return decide(h, a, b, mode, false);
}

OvershadowFact overshadows_interior(const Host& h, const Simplex& a, const Simplex& b,
                                    const Mode& mode) {
    return decide(h, a, b, mode, true);
}

bool cell_in_interior(const Host& h, const SimplexSet& W, const Simplex& s) {
    if (!W.count(s)) return false;
    for (const Simplex& t : h.cx.cells)
        if (t.size() > s.size() && is_face(s, t) && !W.count(t)) return false;
    return true;
}

SunnyCertificate certify_step(const Host& h, const SimplexSet& V, const SimplexSet& W,
                              const Mode& mode, bool stable) {
    for (const Simplex& s : W)
        if (!V.count(s)) throw Error(Err::NotSubcomplexPair, "W not inside V");
    for (const Simplex& s : V)
        if (!h.cx.contains(s)) throw Error(Err::NotSubcomplexPair, "V not inside host");

    SunnyCertificate cert;
    cert.mode = mode;
    cert.stable = stable;
    cert.verdict = true;

    std::vector<Simplex> sources, removed;
    for (const Simplex& s : V)
        if (h.sing.count(s)) sources.push_back(s);
    for (const Simplex& s : V) {
        if (!h.sing.count(s)) continue;
        bool in_target = stable ? cell_in_interior(h, W, s) : W.count(s) > 0;
        if (!in_target) removed.push_back(s);
    }
    for (const Simplex& b : removed) {
        for (const Simplex& a : sources) {
            OvershadowFact f = overshadows_interior(h, a, b, mode);
            cert.checked.push_back(f);
            if (f.verdict) {
                cert.verdict = false;
                cert.violation = f;
                return cert;
            }
        }
    }
    return cert;
}

OrderResult overshadow_order(const Host& h, const std::vector<Simplex>& cells, const Mode& mode) {
    OrderResult res;
    int n = static_cast<int>(cells.size());
    std::vector<std::vector<int>> succ(static_cast<size_t>(n));
    std::vector<int> indeg(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (overshadows(h, cells[static_cast<size_t>(i)], cells[static_cast<size_t>(j)], mode).verdict) {
                succ[static_cast<size_t>(i)].push_back(j);
                ++indeg[static_cast<size_t>(j)];
            }
        }
    }
    // Kahn, stable: among ready nodes always pick the smallest input index
    std::vector<bool> done(static_cast<size_t>(n), false);
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int i = 0; i < n; ++i)
            if (!done[static_cast<size_t>(i)] && indeg[static_cast<size_t>(i)] == 0) { pick = i; break; }
        if (pick < 0) {
            // every remaining node keeps a remaining predecessor, so walking
            // predecessors must loop
            res.ok = false;
            std::vector<std::vector<int>> pred(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i)
                for (int j : succ[static_cast<size_t>(i)]) pred[static_cast<size_t>(j)].push_back(i);
            int cur = -1;
            for (int i = 0; i < n; ++i)
                if (!done[static_cast<size_t>(i)]) { cur = i; break; }
            std::vector<int> seen(static_cast<size_t>(n), -1);
            std::vector<int> path;
            while (seen[static_cast<size_t>(cur)] < 0) {
                seen[static_cast<size_t>(cur)] = static_cast<int>(path.size());
                path.push_back(cur);
                for (int nx : pred[static_cast<size_t>(cur)])
                    if (!done[static_cast<size_t>(nx)]) { cur = nx; break; }
            }
            for (size_t i = path.size(); i-- > static_cast<size_t>(seen[static_cast<size_t>(cur)]);)
                res.cycle.push_back(cells[static_cast<size_t>(path[i])]);
            return res;
        }
        done[static_cast<size_t>(pick)] = true;
        res.order.push_back(cells[static_cast<size_t>(pick)]);
        for (int nx : succ[static_cast<size_t>(pick)]) --indeg[static_cast<size_t>(nx)];
    }
    return res;
}

}  // namespace sunco
