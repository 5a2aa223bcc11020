#pragma once

#include "sunco/rational.hpp"

#include <optional>
#include <vector>

namespace sunco {

// Dense rational matrix, row major. Sized for the small systems that arise
// from simplex geometry (a handful of rows/columns), not for bulk numerics.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<Rat> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Rat& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const Rat& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

// Result of Gauss-Jordan elimination on [A|b].
struct Echelon {
    Mat m;                       // reduced augmented matrix
    std::vector<int> pivot_col;  // pivot column per pivot row
    int rank = 0;
    bool consistent = true;      // false iff a row 0 = nonzero appeared
};

// Full Gauss-Jordan with partial (first nonzero) pivoting. Exact.
inline Echelon reduce(Mat m, int ncols_coeff) {
    Echelon e;
    int r = 0;
    for (int c = 0; c < ncols_coeff && r < m.rows; ++c) {
        int p = -1;
        for (int i = r; i < m.rows; ++i)
            if (m.at(i, c) != 0) { p = i; break; }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(r, j));
        Rat inv = m.at(r, c);
        for (int j = 0; j < m.cols; ++j) m.at(r, j) /= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            Rat f = m.at(i, c);
            for (int j = 0; j < m.cols; ++j) m.at(i, j) -= f * m.at(r, j);
        }
        e.pivot_col.push_back(c);
        ++r;
    }
    e.rank = r;
    for (int i = r; i < m.rows; ++i) {
        bool zero_coeff = true;
        for (int c = 0; c < ncols_coeff; ++c)
            if (m.at(i, c) != 0) { zero_coeff = false; break; }
        if (zero_coeff)
            for (int c = ncols_coeff; c < m.cols; ++c)
                if (m.at(i, c) != 0) e.consistent = false;
    }
    e.m = std::move(m);
    return e;
}

// Solve A x = b when A is square-rank (unique solution expected).
// Returns nullopt if singular or inconsistent.
inline std::optional<std::vector<Rat>> solve_unique(const Mat& A, const std::vector<Rat>& b) {
    Mat m(A.rows, A.cols + 1);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) m.at(i, j) = A.at(i, j);
        m.at(i, A.cols) = b[i];
    }
    Echelon e = reduce(std::move(m), A.cols);
    if (!e.consistent || e.rank != A.cols) return std::nullopt;
    std::vector<Rat> x(A.cols);
    for (int i = 0; i < e.rank; ++i) x[e.pivot_col[i]] = e.m.at(i, A.cols);
    return x;
}

// Rank of the matrix whose rows are the given vectors.
inline int rank_of(const std::vector<Vec>& rows) {
    if (rows.empty()) return 0;
    Mat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
    return reduce(std::move(m), m.cols).rank;
}

// Points are affinely independent iff the difference vectors are linearly independent.
inline bool affinely_independent(const std::vector<Vec>& pts) {
    if (pts.size() <= 1) return true;
    std::vector<Vec> d;
    d.reserve(pts.size() - 1);
    for (size_t i = 1; i < pts.size(); ++i) d.push_back(vec_sub(pts[i], pts[0]));
    return rank_of(d) == static_cast<int>(pts.size()) - 1;
}

// d! * (d-dimensional volume) of the simplex spanned by pts (d+1 points whose
// affine hull is d-dimensional), computed as sqrt-free Gram determinant is not
// rational in general; we only need volumes of full-dimensional simplexes per
// coordinate subspace, so take the absolute determinant of difference vectors.
// Requires |pts| - 1 == dim of the coordinate space.
inline Rat simplex_det(const std::vector<Vec>& pts) {
    int d = static_cast<int>(pts.size()) - 1;
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m.at(i, j) = pts[i + 1][j] - pts[0][j];
    // determinant by fraction-free-ish elimination (plain exact Gauss)
    Rat det = 1;
    for (int c = 0; c < d; ++c) {
        int p = -1;
        for (int i = c; i < d; ++i)
            if (m.at(i, c) != 0) { p = i; break; }
        if (p < 0) return Rat(0);
        if (p != c) {
            for (int j = 0; j < d; ++j) std::swap(m.at(p, j), m.at(c, j));
            det = -det;
        }
        det *= m.at(c, c);
        Rat inv = m.at(c, c);
        for (int i = c + 1; i < d; ++i) {
            if (m.at(i, c) == 0) continue;
            Rat f = m.at(i, c) / inv;
            for (int j = c; j < d; ++j) m.at(i, j) -= f * m.at(c, j);
        }
    }
    if (det < 0) det = -det;
    return det;
}

// Barycentric coordinates of x with respect to the affinely independent points
// pts, or nullopt if x is outside their affine hull. Coordinates may be negative.
inline std::optional<std::vector<Rat>> barycentric_coords(const std::vector<Vec>& pts, const Vec& x) {
    int n = static_cast<int>(pts.size());
    int d = static_cast<int>(x.size());
    Mat A(d + 1, n);
    std::vector<Rat> b(d + 1);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < d; ++i) A.at(i, j) = pts[j][i];
        A.at(d, j) = 1;
    }
    for (int i = 0; i < d; ++i) b[i] = x[i];
    b[d] = 1;
    Mat m(d + 1, n + 1);
    for (int i = 0; i <= d; ++i) {
        for (int j = 0; j < n; ++j) m.at(i, j) = A.at(i, j);
        m.at(i, n) = b[i];
    }
    Echelon e = reduce(std::move(m), n);
    if (!e.consistent || e.rank != n) return std::nullopt;
    std::vector<Rat> lam(n);
    for (int i = 0; i < e.rank; ++i) lam[e.pivot_col[i]] = e.m.at(i, n);
    return lam;
}

}  // namespace sunco
