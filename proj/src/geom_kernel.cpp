#include "sunco/geom_kernel.hpp"

namespace sunco {

Vec combine(const std::vector<Vec>& pts, const std::vector<Rat>& lambda) {
    Vec out(pts[0].size(), Rat(0));
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t c = 0; c < out.size(); ++c) out[c] += lambda[i] * pts[i][c];
    return out;
}

std::optional<std::vector<Vec>> hulls_common_point(const std::vector<std::vector<Vec>>& sets) {
    int l = static_cast<int>(sets.size());
    if (l == 0) return std::nullopt;
    int d = static_cast<int>(sets[0][0].size());
    int nvars = 0;
    std::vector<int> off(static_cast<size_t>(l));
    for (int i = 0; i < l; ++i) {
        off[static_cast<size_t>(i)] = nvars;
        nvars += static_cast<int>(sets[static_cast<size_t>(i)].size());
    }
    StandardLP lp(nvars);
    // each block sums to one
    for (int i = 0; i < l; ++i) {
        std::vector<Rat> row(static_cast<size_t>(nvars), Rat(0));
        for (size_t j = 0; j < sets[static_cast<size_t>(i)].size(); ++j)
            row[static_cast<size_t>(off[static_cast<size_t>(i)]) + j] = 1;
        lp.add_eq(row, Rat(1));
    }
    // block i equals block 0 coordinatewise
    for (int i = 1; i < l; ++i) {
        for (int c = 0; c < d; ++c) {
            std::vector<Rat> row(static_cast<size_t>(nvars), Rat(0));
            for (size_t j = 0; j < sets[0].size(); ++j)
                row[j] = sets[0][j][static_cast<size_t>(c)];
            for (size_t j = 0; j < sets[static_cast<size_t>(i)].size(); ++j)
                row[static_cast<size_t>(off[static_cast<size_t>(i)]) + j] -=
                    sets[static_cast<size_t>(i)][j][static_cast<size_t>(c)];
            lp.add_eq(row, Rat(0));
        }
    }
    LPSolution s = lp.feasible_point();
    if (!s.feasible) return std::nullopt;
    std::vector<Vec> pts;
    for (int i = 0; i < l; ++i) {
        std::vector<Rat> lam(sets[static_cast<size_t>(i)].size());
        for (size_t j = 0; j < lam.size(); ++j)
            lam[j] = s.x[static_cast<size_t>(off[static_cast<size_t>(i)]) + j];
        pts.push_back(combine(sets[static_cast<size_t>(i)], lam));
    }
    return pts;
}

std::optional<std::pair<Vec, Vec>> hull_common_point(const std::vector<Vec>& A,
                                                     const std::vector<Vec>& B) {
    auto r = hulls_common_point({A, B});
    if (!r) return std::nullopt;
    return std::make_pair((*r)[0], (*r)[1]);
}

}  // namespace sunco
