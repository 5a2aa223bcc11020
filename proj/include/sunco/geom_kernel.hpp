#pragma once

#include "sunco/lp.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace sunco {

// Shared exact predicates on convex hulls of rational point lists. These are
// the only geometric decisions in the project; everything above them is
// combinatorial.

// A common point of conv(A) and conv(B), if any.
std::optional<std::pair<Vec, Vec>> hull_common_point(const std::vector<Vec>& A,
                                                     const std::vector<Vec>& B);

// A common point of all the hulls, if any (l-fold intersection).
std::optional<std::vector<Vec>> hulls_common_point(const std::vector<std::vector<Vec>>& sets);

// Barycentric combination helper.
Vec combine(const std::vector<Vec>& pts, const std::vector<Rat>& lambda);

}  // namespace sunco
