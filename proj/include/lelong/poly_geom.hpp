#pragma once

// Exact convex geometry of Newton polyhedra P = conv(S) + R_+^n and of the
// dual sublevel polyhedron {t <= 0 : max_J <J,t> <= -1}.

#include "lelong/rational.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lelong {

// Finite set of nonzero exponent vectors in Q_{>=0}^n. Stored sorted and
// without duplicates, so two sets with the same points compare equal
// regardless of input order.
class ExponentSet {
public:
    ExponentSet(std::size_t dimension, std::vector<QVector> points);

    std::size_t dimension() const noexcept { return dimension_; }
    const std::vector<QVector>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }

    // f(t) = max_J <J,t>
    Rational support(std::span<const Rational> t) const;
    // min_J <J,a>; for a >= 0 this is -f(-a).
    Rational min_pairing(std::span<const Rational> a) const;

    ExponentSet scaled(const Rational& c) const;

    // Keeps only the vertices of conv(S) + R_+^n.
    ExponentSet reduced() const;

    bool operator==(const ExponentSet&) const = default;

private:
    std::size_t dimension_;
    std::vector<QVector> points_;
};

// Facet {a : <normal,a> = offset} of P, normal >= 0. `vertices` are the hull
// vertices on it.
struct DiagramFacet {
    QVector normal;
    Rational offset;
    std::vector<QVector> vertices;
};

// Compact facet of P; `dual_point` is the t0 < 0 with <a,t0> = -1 on it.
struct BoundedFace {
    std::vector<QVector> vertices;
    QVector dual_point;
};

struct NewtonDiagram {
    ExponentSet generators;
    std::vector<QVector> hull_vertices;
    std::vector<BoundedFace> bounded_faces;
    std::vector<DiagramFacet> facets;
};

struct SublevelPolyhedron {
    ExponentSet generators;
    std::vector<QVector> extreme_points;  // the set E, sorted

    bool contains(std::span<const Rational> t) const;
    bool on_level_set(std::span<const Rational> t) const;  // f(t) == -1
    bool is_extreme(std::span<const Rational> t) const;
};

struct GammaAtom {
    QVector vertex;
    Rational mass;
};

struct GammaMeasure {
    std::size_t dimension = 0;
    std::vector<GammaAtom> atoms;
    Rational total_mass;
};

NewtonDiagram dominated_hull(const ExponentSet& s);

// Throws DegenerateIndicator when some axis k has J_k = 0 for every J.
SublevelPolyhedron sublevel_vertices(const ExponentSet& s);

// Hull vertices J with <J,t0> = -1, sorted. Throws InputError when t0 is
// not an extreme point of the sublevel polyhedron.
std::vector<QVector> dual_face(const ExponentSet& s, std::span<const Rational> t0);
std::vector<QVector> dual_face(const NewtonDiagram& diagram, const SublevelPolyhedron& sub,
                               std::span<const Rational> t0);

// Exact volume of conv({0} u face_vertices) in R^n, triangulated by fanning
// from the lexicographically smallest face vertex. Zero when the points do
// not affinely span R^n. Assumes the face vertices lie on a hyperplane
// <a,t0> = -1 (not checked).
Rational cone_volume(const std::vector<QVector>& face_vertices, std::size_t n);

// Atoms with zero mass (wall vertices whose dual face is lower dimensional)
// are omitted.
GammaMeasure gamma_measure(const ExponentSet& s);

// Volume of the region swept by segments from 0 to the facets of P that
// avoid the origin, summed facet by facet from the primal description.
Rational theta_volume(const NewtonDiagram& diagram);

}  // namespace lelong
