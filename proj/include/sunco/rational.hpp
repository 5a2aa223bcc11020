#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace sunco {

// Exact rational scalar. All geometry in this project is computed over Q;
// nothing is ever rounded.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

// A point with rational coordinates.
using Vec = std::vector<Rat>;

// Parse "a/b" or "a". Normalizes sign and reduces; rejects zero denominators.
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::runtime_error("empty rational literal");
    Rat r;
    try {
        r = Rat(s);
    } catch (const std::exception&) {
        throw std::runtime_error("bad rational literal: " + s);
    }
    if (denominator(r) == 0) throw std::runtime_error("zero denominator: " + s);
    mpq_canonicalize(r.backend().data());
    return r;
}

inline std::string rat_str(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return r.str();
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec vec_add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec vec_scale(const Rat& s, const Vec& a) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

// a + t*(b-a)
inline Vec vec_lerp(const Vec& a, const Vec& b, const Rat& t) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return r;
}

// Chebyshev (max) distance; the fixed metric used for eps-neighborhoods.
inline Rat dist_max(const Vec& a, const Vec& b) {
    Rat d = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        Rat x = a[i] - b[i];
        if (x < 0) x = -x;
        if (x > d) d = x;
    }
    return d;
}

}  // namespace sunco
