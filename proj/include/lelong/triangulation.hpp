#pragma once

#include "lelong/rational.hpp"

#include <cstddef>
#include <vector>

namespace lelong::geometry {

// Indices into the point list handed to pulling_triangulation.
using Simplex = std::vector<std::size_t>;

// Facet of conv(points) in R^d: <normal, x> >= offset on the polytope,
// equality on `members` (indices into the point list).
struct HullFacet {
    QVector normal;
    Rational offset;
    std::vector<std::size_t> members;
};

// Brute-force facet enumeration of conv(points) for a full-dimensional set
// in R^d: every affinely independent d-subset spans a candidate hyperplane,
// kept when all points lie on one side. Quadratic-combinatorial; meant for
// d <= 4 and a few dozen points.
std::vector<HullFacet> hull_facets(const std::vector<QVector>& points);

// Pulling triangulation of conv(points). The points must affinely span
// R^d. At every recursion level the earliest listed point of the current
// face is the apex, so callers control the fan vertex through list order.
std::vector<Simplex> pulling_triangulation(const std::vector<QVector>& points);

// |det(v1 - v0, ..., vd - v0)| / d!
Rational simplex_volume(const std::vector<QVector>& vertices);

// Volume of conv(points) in R^d via pulling_triangulation; 0 when the
// points do not affinely span R^d.
Rational polytope_volume(const std::vector<QVector>& points);

}  // namespace lelong::geometry
