#pragma once

#include "sunco/linalg.hpp"

#include <optional>
#include <vector>

namespace sunco {

// Exact linear programming over Q in standard form:
//
//   maximize c.x  subject to  A x = b,  x >= 0
//
// decided by exhaustive enumeration of basic solutions. The feasible regions
// here are always bounded (every variable group is constrained into a standard
// simplex), so the optimum is attained at a basic feasible solution and
// enumerating all of them is a complete decision procedure: no feasible basis
// means the polytope is empty. Dimensions stay tiny (fiber products of two or
// three simplexes), which keeps the binomial blowup harmless.
struct LPSolution {
    bool feasible = false;
    Rat value;             // max of c.x when feasible
    std::vector<Rat> x;    // an optimal vertex
};

class StandardLP {
public:
    StandardLP(int nvars) : n_(nvars) {}

    int num_vars() const { return n_; }

    void add_eq(const std::vector<Rat>& coeffs, const Rat& rhs) {
        rows_.push_back(coeffs);
        rhs_.push_back(rhs);
    }

    // a.x >= rhs turned into equality with a fresh slack: a.x - s = rhs
    int add_ge(std::vector<Rat> coeffs, const Rat& rhs) {
        int slack = add_var();
        coeffs.resize(n_, Rat(0));
        coeffs[slack] = -1;
        add_eq(coeffs, rhs);
        return slack;
    }

    int add_var() {
        ++n_;
        for (auto& row : rows_) row.resize(n_, Rat(0));
        return n_ - 1;
    }

    LPSolution maximize(const std::vector<Rat>& c) const;

    LPSolution feasible_point() const {
        return maximize(std::vector<Rat>(n_, Rat(0)));
    }

private:
    int n_;
    std::vector<std::vector<Rat>> rows_;
    std::vector<Rat> rhs_;
};

inline LPSolution StandardLP::maximize(const std::vector<Rat>& c) const {
    LPSolution best;
    int m = static_cast<int>(rows_.size());
    Mat aug(m, n_ + 1);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n_ && j < static_cast<int>(rows_[i].size()); ++j)
            aug.at(i, j) = rows_[i][j];
        aug.at(i, n_) = rhs_[i];
    }
    Echelon e = reduce(std::move(aug), n_);
    if (!e.consistent) return best;
    int r = e.rank;
    if (r == 0) {
        // only 0 = 0 rows: x = 0 is the unique basic solution
        best.feasible = true;
        best.x.assign(n_, Rat(0));
        best.value = 0;
        return best;
    }
    // independent-row system of rank r
    Mat A(r, n_);
    std::vector<Rat> b(r);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < n_; ++j) A.at(i, j) = e.m.at(i, j);
        b[i] = e.m.at(i, n_);
    }
    // enumerate r-subsets of columns
    std::vector<int> idx(r);
    for (int i = 0; i < r; ++i) idx[i] = i;
    Mat B(r, r);
    while (true) {
        for (int i = 0; i < r; ++i)
            for (int k = 0; k < r; ++k) B.at(i, k) = A.at(i, idx[k]);
        if (auto xb = solve_unique(B, b)) {
            bool ok = true;
            for (const Rat& v : *xb)
                if (v < 0) { ok = false; break; }
            if (ok) {
                Rat val = 0;
                for (int k = 0; k < r; ++k) val += c[idx[k]] * (*xb)[k];
                if (!best.feasible || val > best.value) {
                    best.feasible = true;
                    best.value = val;
                    best.x.assign(n_, Rat(0));
                    for (int k = 0; k < r; ++k) best.x[idx[k]] = (*xb)[k];
                }
            }
        }
        // next combination
        int i = r - 1;
        while (i >= 0 && idx[i] == n_ - r + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int k = i + 1; k < r; ++k) idx[k] = idx[k - 1] + 1;
    }
    return best;
}

}  // namespace sunco
