#include "doctest.h"

#include "lelong/errors.hpp"
#include "lelong/poly_geom.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <set>

using namespace lelong;
using testing_support::es;
using testing_support::negated;
using testing_support::qv;

namespace {

// p lies in conv(others) + R_+^2 iff it dominates a point of some segment
// [q, r] of other points. Solved exactly in the segment parameter.
bool dominated_by_segment(const QVector& p, const QVector& q, const QVector& r) {
    Rational lo = 0, hi = 1;
    for (std::size_t i = 0; i < 2; ++i) {
        // lam * (q_i - r_i) <= p_i - r_i
        const Rational a = q[i] - r[i];
        const Rational b = p[i] - r[i];
        if (a == 0) {
            if (b < 0) return false;
        } else if (a > 0) {
            hi = std::min(hi, Rational(b / a));
        } else {
            lo = std::max(lo, Rational(b / a));
        }
    }
    return lo <= hi;
}

std::vector<QVector> brute_force_vertices_2d(const std::vector<QVector>& pts) {
    std::vector<QVector> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool inside = false;
        for (std::size_t j = 0; j < pts.size() && !inside; ++j)
            for (std::size_t k = j; k < pts.size() && !inside; ++k)
                if (j != i && k != i) inside = dominated_by_segment(pts[i], pts[j], pts[k]);
        if (!inside) out.push_back(pts[i]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Segments [u, v] between hull vertices whose supporting line has a
// strictly positive normal and leaves every point on one side.
std::set<std::vector<QVector>> brute_force_bounded_faces_2d(const std::vector<QVector>& verts, const std::vector<QVector>& pts) {
    std::set<std::vector<QVector>> faces;
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j) {
            const auto& u = verts[i];
            const auto& v = verts[j];
            const QVector w{v[1] - u[1], u[0] - v[0]};
            QVector nrm = w;
            if (nrm[0] < 0 || (nrm[0] == 0 && nrm[1] < 0)) nrm = negated(nrm);
            if (nrm[0] <= 0 || nrm[1] <= 0) continue;
            const Rational c = dot(nrm, u);
            const bool half_plane = std::all_of(pts.begin(), pts.end(), [&](const QVector& p) { return dot(nrm, p) >= c; });
            if (half_plane) faces.insert({u, v});
        }
    return faces;
}

// Intersections of pairs of constraint lines <J,t> = -1, t_k = 0, kept when
// feasible.
std::vector<QVector> pair_enumeration_2d(const ExponentSet& s) {
    std::vector<std::pair<QVector, Rational>> lines;
    for (const auto& j : s.points()) lines.push_back({j, Rational(-1)});
    lines.push_back({qv({1, 0}), Rational(0)});
    lines.push_back({qv({0, 1}), Rational(0)});
    std::set<QVector> out;
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            const auto& [a, b] = lines[i];
            const auto& [c, d] = lines[j];
            const Rational det = a[0] * c[1] - a[1] * c[0];
            if (det == 0) continue;
            QVector t{(b * c[1] - a[1] * d) / det, (a[0] * d - b * c[0]) / det};
            bool feasible = t[0] <= 0 && t[1] <= 0;
            for (const auto& g : s.points()) feasible = feasible && dot(g, t) <= -1;
            if (feasible) out.insert(t);
        }
    return {out.begin(), out.end()};
}

// For each probe direction a > 0, the maximizer of <a,t> over the feasible
// region, located on a dense grid of its upper boundary and snapped to the
// nearest exact candidate.
std::vector<QVector> argmax_probe_2d(const ExponentSet& s, const std::vector<QVector>& candidates) {
    std::vector<std::vector<double>> gens;
    for (const auto& j : s.points()) gens.push_back(to_double(j));
    double lo = 0.0;
    for (const auto& c : candidates) lo = std::min(lo, to_double(c[0]));
    lo -= 1.0;
    constexpr int grid = 4000;
    std::vector<std::pair<double, double>> boundary;
    for (int i = 0; i <= grid; ++i) {
        const double t1 = lo + (0.0 - lo) * i / grid;
        double t2 = 0.0;
        bool ok = true;
        for (const auto& g : gens) {
            if (g[1] > 0) t2 = std::min(t2, (-1.0 - g[0] * t1) / g[1]);
            else if (g[0] * t1 > -1.0 + 1e-12) ok = false;
        }
        if (ok) boundary.emplace_back(t1, t2);
    }
    std::set<QVector> hit;
    constexpr int directions = 400;
    for (int d = 1; d < directions; ++d) {
        const double th = std::numbers::pi / 2 * d / directions;
        const double a1 = std::cos(th), a2 = std::sin(th);
        std::size_t best = 0;
        for (std::size_t i = 1; i < boundary.size(); ++i)
            if (a1 * boundary[i].first + a2 * boundary[i].second > a1 * boundary[best].first + a2 * boundary[best].second)
                best = i;
        std::optional<QVector> nearest;
        double dist = INFINITY;
        for (const auto& c : candidates) {
            const double dd = std::hypot(to_double(c[0]) - boundary[best].first, to_double(c[1]) - boundary[best].second);
            if (dd < dist) {
                dist = dd;
                nearest = c;
            }
        }
        hit.insert(*nearest);
    }
    return {hit.begin(), hit.end()};
}

// Area of the region under the Newton diagram of a diagram meeting both
// axes: polygon 0 -> vertices by decreasing a_1 -> 0.
Rational shoelace(std::vector<QVector> verts) {
    std::sort(verts.begin(), verts.end(), [](const QVector& a, const QVector& b) { return a[0] > b[0]; });
    std::vector<QVector> poly{qv({0, 0})};
    poly.insert(poly.end(), verts.begin(), verts.end());
    Rational twice = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % poly.size()];
        twice += p[0] * q[1] - q[0] * p[1];
    }
    return abs(twice) / 2;
}

}  // namespace

TEST_CASE("dominated_hull examples") {
    auto d = dominated_hull(es(2, {qv({2, 0}), qv({0, 3})}));
    CHECK(d.hull_vertices == std::vector<QVector>{qv({0, 3}), qv({2, 0})});
    REQUIRE(d.bounded_faces.size() == 1);
    CHECK(d.bounded_faces[0].vertices.size() == 2);

    d = dominated_hull(es(2, {qv({1, 0}), qv({0, 1}), qv({1, 1})}));
    CHECK(d.hull_vertices == std::vector<QVector>{qv({0, 1}), qv({1, 0})});

    d = dominated_hull(es(2, {qv({4, 0}), qv({1, 1}), qv({0, 4})}));
    CHECK(d.hull_vertices == std::vector<QVector>{qv({0, 4}), qv({1, 1}), qv({4, 0})});
    std::set<std::vector<QVector>> faces;
    for (const auto& f : d.bounded_faces) faces.insert(f.vertices);
    CHECK(faces == std::set<std::vector<QVector>>{{qv({0, 4}), qv({1, 1})}, {qv({1, 1}), qv({4, 0})}});
}

TEST_CASE("dominated_hull agrees with the brute-force half-plane oracle") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 150; ++trial) {
        const auto s = testing_support::random_exponent_set(rng, 2, trial % 2 == 0);
        const auto d = dominated_hull(s);
        const auto oracle = brute_force_vertices_2d(s.points());
        CHECK(d.hull_vertices == oracle);
        std::set<std::vector<QVector>> faces;
        for (const auto& f : d.bounded_faces) faces.insert(f.vertices);
        CHECK(faces == brute_force_bounded_faces_2d(oracle, s.points()));
    }
}

TEST_CASE("dominated_hull: every hull vertex on a bounded face, none dominated") {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + trial % 2;
        const auto d = dominated_hull(testing_support::random_exponent_set(rng, n, true));
        for (const auto& v : d.hull_vertices) {
            if (d.hull_vertices.size() >= 2) {
                const bool on_face = std::any_of(d.bounded_faces.begin(), d.bounded_faces.end(), [&](const BoundedFace& f) {
                    return std::find(f.vertices.begin(), f.vertices.end(), v) != f.vertices.end();
                });
                CHECK(on_face);
            }
            for (const auto& w : d.hull_vertices) {
                if (w == v) continue;
                bool dom = true;
                for (std::size_t k = 0; k < n; ++k) dom = dom && w[k] <= v[k];
                CHECK_FALSE(dom);
            }
        }
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(ExponentSet(2, {qv({1, 0}), qv({1, 0, 0})}), InputError);
    CHECK_THROWS_AS(ExponentSet(2, {qv({-1, 2})}), InputError);
    CHECK_THROWS_AS(ExponentSet(2, {qv({0, 0})}), InputError);
    CHECK_THROWS_AS(ExponentSet(2, {}), InputError);
    CHECK_THROWS_AS(sublevel_vertices(es(2, {qv({1, 0}), qv({3, 0})})), DegenerateIndicator);
    try {
        sublevel_vertices(es(3, {qv({1, 0, 0}), qv({0, 0, 2})}));
        FAIL("expected DegenerateIndicator");
    } catch (const DegenerateIndicator& e) {
        CHECK(e.axis() == 1);
        CHECK(std::string(e.what()).find("direction 2") != std::string::npos);
    }
    CHECK_THROWS_AS(gamma_measure(es(2, {qv({0, 2})})), DegenerateIndicator);
    CHECK_THROWS_AS(dual_face(es(2, {qv({1, 0}), qv({0, 1})}), qv({-2, -1})), InputError);
}

TEST_CASE("sublevel_vertices examples") {
    CHECK(sublevel_vertices(es(2, {qv({1, 0}), qv({0, 1})})).extreme_points == std::vector<QVector>{qv({-1, -1})});
    CHECK(sublevel_vertices(es(2, {qv({2, 0}), qv({0, 3})})).extreme_points ==
          std::vector<QVector>{qv({Rational(-1, 2), Rational(-1, 3)})});
    CHECK(sublevel_vertices(es(2, {qv({4, 0}), qv({1, 1}), qv({0, 4})})).extreme_points ==
          std::vector<QVector>{qv({Rational(-3, 4), Rational(-1, 4)}), qv({Rational(-1, 4), Rational(-3, 4)})});
}

TEST_CASE("sublevel vertices: pair enumeration and argmax probe agree") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        const auto s = testing_support::random_exponent_set(rng, 2, trial % 3 == 0);
        const auto sub = sublevel_vertices(s);
        const auto pairs = pair_enumeration_2d(s);
        CHECK(sub.extreme_points == pairs);
        CHECK(argmax_probe_2d(s, pairs) == pairs);
        for (const auto& t : sub.extreme_points) {
            CHECK(sub.is_extreme(t));
            CHECK(s.support(t) == -1);
        }
    }
}

TEST_CASE("dual_face examples") {
    CHECK(dual_face(es(2, {qv({1, 0}), qv({0, 1})}), qv({-1, -1})) == std::vector<QVector>{qv({0, 1}), qv({1, 0})});
    CHECK(dual_face(es(2, {qv({2, 0}), qv({0, 3})}), qv({Rational(-1, 2), Rational(-1, 3)})) ==
          std::vector<QVector>{qv({0, 3}), qv({2, 0})});
    CHECK(dual_face(es(2, {qv({4, 0}), qv({1, 1}), qv({0, 4})}), qv({Rational(-1, 4), Rational(-3, 4)})) ==
          std::vector<QVector>{qv({1, 1}), qv({4, 0})});
}

TEST_CASE("cone_volume examples") {
    CHECK(cone_volume({qv({1, 0}), qv({0, 1})}, 2) == Rational(1, 2));
    CHECK(cone_volume({qv({2, 0}), qv({0, 3})}, 2) == 3);
    CHECK(cone_volume({qv({4, 0}), qv({1, 1})}, 2) == 2);
    CHECK(cone_volume({qv({1, 0, 0}), qv({0, 1, 0}), qv({0, 0, 1})}, 3) == Rational(1, 6));
    CHECK(cone_volume({qv({2, 0})}, 2) == 0);
    // Square face: two simplices.
    CHECK(cone_volume({qv({1, 0, 1}), qv({0, 1, 1}), qv({1, 1, 1}), qv({0, 0, 1})}, 3) == Rational(1, 3));
}

TEST_CASE("gamma_measure examples") {
    auto g = gamma_measure(es(2, {qv({1, 0}), qv({0, 1})}));
    REQUIRE(g.atoms.size() == 1);
    CHECK(g.atoms[0].vertex == qv({-1, -1}));
    CHECK(g.atoms[0].mass == Rational(1, 2));

    g = gamma_measure(es(2, {qv({2, 0}), qv({0, 3})}));
    REQUIRE(g.atoms.size() == 1);
    CHECK(g.atoms[0].vertex == qv({Rational(-1, 2), Rational(-1, 3)}));
    CHECK(g.atoms[0].mass == 3);

    const auto s = es(2, {qv({4, 0}), qv({1, 1}), qv({0, 4})});
    g = gamma_measure(s);
    REQUIRE(g.atoms.size() == 2);
    CHECK(g.atoms[0].vertex == qv({Rational(-3, 4), Rational(-1, 4)}));
    CHECK(g.atoms[0].mass == 2);
    CHECK(g.atoms[1].vertex == qv({Rational(-1, 4), Rational(-3, 4)}));
    CHECK(g.atoms[1].mass == 2);
    CHECK(g.total_mass == 4);
    CHECK(shoelace(dominated_hull(s).hull_vertices) == 4);
}

TEST_CASE("wall vertices carry no mass") {
    // E = {(-1,0), (0,-1)}, both on walls, dual faces are single points.
    const auto g = gamma_measure(es(2, {qv({1, 1})}));
    CHECK(g.atoms.empty());
    CHECK(g.total_mass == 0);
}

TEST_CASE("mass conservation") {
    std::mt19937 rng(14);
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const auto s = testing_support::random_exponent_set(rng, n, trial % 2 == 0, n == 4 ? 3 : 5);
        const auto g = gamma_measure(s);
        Rational sum = 0;
        for (const auto& a : g.atoms) {
            CHECK(a.mass > 0);
            sum += a.mass;
        }
        CHECK(sum == g.total_mass);
        const auto d = dominated_hull(s);
        CHECK(g.total_mass == theta_volume(d));
        if (n == 2 && trial % 2 == 0) CHECK(g.total_mass == shoelace(d.hull_vertices));
    }
}

TEST_CASE("duality consistency") {
    std::mt19937 rng(15);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + trial % 2;
        const auto s = testing_support::random_exponent_set(rng, n, trial % 2 == 0);
        const auto d = dominated_hull(s);
        for (const auto& a : gamma_measure(s).atoms) {
            const auto face = dual_face(s, a.vertex);
            for (const auto& j : face) CHECK(dot(j, a.vertex) == -1);
            for (const auto& j : d.hull_vertices)
                if (std::find(face.begin(), face.end(), j) == face.end()) CHECK(dot(j, a.vertex) < -1);
        }
    }
}

TEST_CASE("scale covariance") {
    std::mt19937 rng(16);
    const Rational cs[] = {Rational(1, 3), Rational(2), Rational(5, 2)};
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial % 2;
        const auto s = testing_support::random_exponent_set(rng, n, false);
        const Rational c = cs[trial % 3];
        const auto g = gamma_measure(s);
        const auto gc = gamma_measure(s.scaled(c));
        REQUIRE(g.atoms.size() == gc.atoms.size());
        Rational cn = 1;
        for (std::size_t k = 0; k < n; ++k) cn *= c;
        for (std::size_t i = 0; i < g.atoms.size(); ++i) {
            // Sorted vertex order reverses nothing: t -> t/c is monotone.
            QVector v = g.atoms[i].vertex;
            for (auto& x : v) x /= c;
            CHECK(gc.atoms[i].vertex == v);
            CHECK(gc.atoms[i].mass == cn * g.atoms[i].mass);
        }
    }
}

TEST_CASE("order invariance") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial % 2;
        const auto s = testing_support::random_exponent_set(rng, n, false);
        auto pts = s.points();
        std::shuffle(pts.begin(), pts.end(), rng);
        pts.push_back(pts.front());
        const ExponentSet t(n, pts);
        CHECK(t == s);
        const auto a = gamma_measure(s);
        const auto b = gamma_measure(t);
        REQUIRE(a.atoms.size() == b.atoms.size());
        for (std::size_t i = 0; i < a.atoms.size(); ++i) {
            CHECK(a.atoms[i].vertex == b.atoms[i].vertex);
            CHECK(a.atoms[i].mass == b.atoms[i].mass);
        }
        CHECK(dominated_hull(s).hull_vertices == dominated_hull(t).hull_vertices);
    }
}
